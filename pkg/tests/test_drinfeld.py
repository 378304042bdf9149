from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import Q
from yrk import linalg
from yrk.drinfeld import (coassociativity_check, drinfeld_tensor, drinfeld_tensor_series,
                          drinfeld_tensor_symbolic)
from yrk.errors import PoleCollisionError
from yrk.repn import evaluation_rep_sl2, vector_rep_sl3, verify_relations

S_GENERIC = [Q(Fraction(5, 3)), Q(-2, 1), Q(Fraction(1, 7), Fraction(-3, 2))]


def test_x_minus_on_c2_left_factor(c2_0, c2_1):
    s = Q(Fraction(9, 4))
    T = drinfeld_tensor(c2_0, c2_1, s)
    xi_s = c2_1.currents(0).xi(s)
    expected = linalg.kron(c2_0.xm0[0], xi_s) + linalg.kron(c2_0.identity(), c2_1.xm0[0])
    assert linalg.is_zero(T.xm0[0] - expected)


def test_trivial_factors(c2_1, triv):
    s = Q(Fraction(-3, 5), 1)
    assert drinfeld_tensor(c2_1, triv, s).equals(c2_1.shift(s))
    assert drinfeld_tensor(triv, c2_1, s).equals(c2_1)


@pytest.mark.parametrize("s", S_GENERIC)
def test_tensor_is_a_module(c2_0, c2_1, s):
    assert verify_relations(drinfeld_tensor(c2_0, c2_1, s), samples=2).passed


def test_sl3_tensor_is_a_module():
    V, W = vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))
    assert verify_relations(drinfeld_tensor(V, W, Q(Fraction(2, 3))), samples=2).passed


def test_t_modes_are_primitive(c2_0, c2_1):
    # Δᴰ_s(t_r) = τ_s(t_r)⊗1 + 1⊗t_r, checked for r ≤ 2
    s = Q(Fraction(7, 2), -1)
    T = drinfeld_tensor(c2_0, c2_1, s)
    lhs = T.t_modes(0, 3)
    left, right = c2_0.shift(s).t_modes(0, 3), c2_1.t_modes(0, 3)
    for r in range(3):
        assert linalg.is_zero(lhs[r] - linalg.kron(left[r], c2_1.identity())
                              - linalg.kron(c2_0.identity(), right[r]))


def test_series_first_correction(c2_0):
    ser = drinfeld_tensor_series(c2_0, c2_0, 2)
    c1 = ser["xp"][0].coeff(1)
    assert linalg.is_zero(c1 + linalg.kron(c2_0.xi0[0], c2_0.xp0[0]) * c2_0.hbar)


def test_series_matches_residue_form(c2_0, c2_1):
    N = 4
    ser = drinfeld_tensor_series(c2_0, c2_1, N)
    mod = drinfeld_tensor_symbolic(c2_0, c2_1)
    for key, mats in (("xp", mod.xp0), ("xm", mod.xm0)):
        expansion = mats[0].series_at_infinity(N)
        for k in range(N + 1):
            assert linalg.is_zero(expansion[k] - ser[key][0].coeff(k)), (key, k)


def test_symbolic_agrees_with_pointwise(c2_0, c2_1):
    mod = drinfeld_tensor_symbolic(c2_0, c2_1)
    s = Q(Fraction(11, 3))
    assert mod.at(s).equals(drinfeld_tensor(c2_0, c2_1, s))
    assert linalg.is_zero(mod.xp0[0](s) - drinfeld_tensor(c2_0, c2_1, s).xp0[0])
    assert set(mod.pole_candidates()) == {Q(1)}


def test_coassociativity_exact(c2_0, c2_1):
    rep = coassociativity_check(c2_0, c2_1, evaluation_rep_sl2(Q(-2)), Q(3), Q(5))
    assert rep.passed and rep.max_residual() == 0.0


def test_coassociativity_with_trivial_middle(c2_0, c2_1, triv):
    s1, s2 = Q(3), Q(5)
    left = drinfeld_tensor(drinfeld_tensor(c2_0, triv, s1), c2_1, s2)
    assert left.equals(drinfeld_tensor(c2_0, c2_1, s1 + s2))


def test_shift_covariance(c2_0, c2_1):
    s, t = Q(Fraction(4, 3)), Q(Fraction(-1, 2), 2)
    assert drinfeld_tensor(c2_0.shift(t), c2_1, s).equals(drinfeld_tensor(c2_0, c2_1, s + t))


def test_pole_collision(c2_0, c2_1):
    with pytest.raises(PoleCollisionError):
        drinfeld_tensor(c2_0, c2_1, Q(1))
