from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q, exact
from yrk import linalg
from yrk.drinfeld import drinfeld_tensor
from yrk.errors import MathDomainError
from yrk.ratfun import RatFun
from yrk.ratmat import RatMat, kron as rkron
from yrk.repn import evaluation_rep_sl2, standard_tensor, trivial_rep, vector_rep_sl3
from yrk.rminus import (check_cocycle, check_intertwine_minus, check_translation, cocycle_residuals,
                        rminus_blocks, rminus_recursive, rminus_sl2_closed_form, rplus, t_of_h,
                        unipotent_inverse)

s = RatFun.x()
E12 = exact([[0, 1], [0, 0]])
E21 = exact([[0, 0], [1, 0]])
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def c2(a):
    return evaluation_rep_sl2(a, 1)


def sl2_targets():
    return [
        c2(Q(Fraction(13, 10))),
        drinfeld_tensor(c2(1), c2(-1), 0),
        standard_tensor(c2(Q(Fraction(7, 10))), c2(Q(Fraction(-21, 10))), 0),
        drinfeld_tensor(c2(Q(0, 1)), c2(Q(2)), Q(Fraction(1, 2))),
    ]


def test_c2_c2_closed_expression(c2_0):
    expected = RatMat.identity(4) + RatMat.const(linalg.kron(E21, E12)) * (1 / s)
    assert rminus_recursive(c2_0, c2_0) == expected


@pytest.mark.parametrize("V", sl2_targets())
def test_c2_left_factor_formula(c2_0, V):
    expected = RatMat.identity(2 * V.dim) + rkron(RatMat.const(E21), V.currents(0).xp)
    assert rminus_recursive(c2_0, V) == expected


@pytest.mark.parametrize("V", sl2_targets())
def test_recursion_matches_closed_form(c2_0, V):
    assert rminus_recursive(c2_0, V) == rminus_sl2_closed_form(c2_0, V)


def test_closed_form_larger_left_factor():
    V1 = drinfeld_tensor(c2(0), c2(Q(Fraction(3, 2))), Q(1, 1))
    V2 = c2(Q(-1, 1))
    assert rminus_recursive(V1, V2) == rminus_sl2_closed_form(V1, V2)


def test_trivial_factors(c2_1, triv):
    assert rminus_recursive(triv, c2_1) == RatMat.identity(2)
    assert rminus_recursive(c2_1, triv) == RatMat.identity(2)
    assert rminus_sl2_closed_form(triv, c2_1) == RatMat.identity(2)
    assert rplus(triv, c2_1) == RatMat.identity(2)


def test_rplus_c2_c2(c2_0):
    expected = RatMat.identity(4) + RatMat.const(linalg.kron(E12, E21)) * (1 / s)
    assert rplus(c2_0, c2_0) == expected


def _weight_diff(V, a, b):
    cd = V.cartan
    diff = [Fraction(int(x.re.numerator), int(x.re.denominator)) for x in
            (p - q for p, q in zip(V.weight(a), V.weight(b)))]
    return cd.root_coords(diff)


@pytest.mark.parametrize("pair", [(vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))),
                                  (c2(0), drinfeld_tensor(c2(1), c2(-1), 0))])
def test_triangularity(pair):
    V1, V2 = pair
    d2 = V2.dim
    Rm = rminus_recursive(V1, V2) - RatMat.identity(V1.dim * d2)
    Rp = rplus(V1, V2) - RatMat.identity(V1.dim * d2)
    for (r, c), f in np.ndenumerate(Rm.a):
        if not f.is_zero():
            k = _weight_diff(V1, c // d2, r // d2)
            assert min(k) >= 0 and any(k)
    for (r, c), f in np.ndenumerate(Rp.a):
        if not f.is_zero():
            k = _weight_diff(V1, r // d2, c // d2)
            assert min(k) >= 0 and any(k)


@pytest.mark.parametrize("pair", [(vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))),
                                  (c2(0), drinfeld_tensor(c2(1), c2(-1), 0)),
                                  (drinfeld_tensor(c2(0), c2(2), Q(0, 1)), c2(Q(1, 2)))])
def test_block_decay(pair):
    # R⁻_β = O(s^-ν(β))
    V1, V2 = pair
    cd = V1.cartan
    for beta, X in rminus_blocks(V1, V2).items():
        nu = cd.nu_min_decomposition(beta)
        ser = X.series_at_infinity(nu)
        assert all(linalg.is_zero(ser[k]) for k in range(nu))
        assert not linalg.is_zero(ser[nu])


def test_height_one_block_is_a_neumann_series():
    V1, V2 = vector_rep_sl3(0), vector_rep_sl3(Q(Fraction(2, 3), 1))
    h = [Fraction(2), Fraction(1, 3)]
    blocks = rminus_blocks(V1, V2, h)
    n = V1.dim * V2.dim
    T = linalg.kron(t_of_h(V1, h), V2.identity()) + linalg.kron(V1.identity(), t_of_h(V2, h))
    from yrk.repn import realization, root_vectors_in
    z = realization(V1.cartan)
    N = 5
    for (alpha, xm1, _), (_, _, xp2) in zip(root_vectors_in(z.roots, V1.xp0, V1.xm0),
                                            root_vectors_in(z.roots, V2.xp0, V2.xm0)):
        if sum(alpha) != 1:
            continue
        ah = sum(a * v for a, v in zip(alpha, h))
        rhs = linalg.kron(xm1, xp2) * Q(-ah)
        ser = blocks[alpha].series_at_infinity(N)
        term = rhs
        for k in range(N):
            assert linalg.is_zero(ser[k + 1] + term * Q(1 / Fraction(ah) ** (k + 1)))
            term = linalg.commutator(T, term)
        assert linalg.is_zero(ser[0]) and ser[0].shape == (n, n)


def test_independent_of_h():
    V1, V2 = vector_rep_sl3(0), vector_rep_sl3(Q(Fraction(-1, 2), 1))
    base = rminus_recursive(V1, V2)
    assert rminus_recursive(V1, V2, [Fraction(3), Fraction(1, 2)]) == base
    assert rminus_recursive(V1, V2, [Fraction(-1), Fraction(4)]) == base


def test_irregular_h_rejected():
    with pytest.raises(MathDomainError):
        rminus_recursive(vector_rep_sl3(0), vector_rep_sl3(1), [Fraction(1), Fraction(-1)])


def test_numeric_s_matches_symbolic(c2_0):
    V = drinfeld_tensor(c2(1), c2(-1), 0)
    R = rminus_recursive(c2_0, V)
    pt = Q(Fraction(5, 2), Fraction(1, 3))
    assert linalg.is_zero(rminus_recursive(c2_0, V, s=pt) - R(pt))
    Vf, Wf = c2_0.to_float(), V.to_float()
    val = rminus_recursive(Vf, Wf, s=complex(pt))
    assert linalg.max_abs(val - linalg.to_complex(R(pt))) < 1e-13


@pytest.mark.parametrize("pair", [(c2(0), c2(Q(Fraction(13, 10)))),
                                  (vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))),
                                  (c2(0), drinfeld_tensor(c2(1), c2(-1), 0))])
def test_intertwining_and_one_jet(pair):
    rep = check_intertwine_minus(*pair)
    assert rep.passed and rep.max_residual() == 0.0


@given(fracs, fracs)
@settings(max_examples=10, deadline=None)
def test_translation(a, b):
    rep = check_translation(c2(0), c2(Q(Fraction(3, 7))), Q(a), Q(b))
    assert rep.passed


def test_unipotent_inverse(c2_0):
    R = rminus_recursive(c2_0, drinfeld_tensor(c2(1), c2(-1), 0))
    assert R @ unipotent_inverse(R) == RatMat.identity(8)


def test_cocycle_exact_point():
    V1, V2, V3 = c2(0), c2(Q(Fraction(1, 3))), c2(Q(-2))
    assert cocycle_residuals(V1, V2, V3, Q(2), Q(5)) == (0.0, 0.0)
    rep = check_cocycle(V1, V2, V3, samples=3, seed=4)
    assert rep.passed and rep.max_residual() == 0.0


def test_cocycle_trivial_middle_and_right(c2_0, c2_1, triv):
    s1, s2 = Q(2), Q(5)
    # both sides collapse to a single two-factor R⁻
    assert cocycle_residuals(c2_0, triv, c2_1, s1, s2) == (0.0, 0.0)
    assert cocycle_residuals(c2_0, c2_1, triv, s1, s2) == (0.0, 0.0)
    lhs = rminus_recursive(drinfeld_tensor(c2_0, triv, s1), c2_1, s=s2)
    assert linalg.is_zero(lhs - rminus_recursive(c2_0, c2_1, s=s1 + s2))
