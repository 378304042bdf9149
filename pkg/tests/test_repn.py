from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conftest import Q, exact
from yrk import linalg
from yrk.errors import SchemaError
from yrk.ratfun import RatFun
from yrk.ratmat import RatMat
from yrk.repn import (check_mode_shift, evaluation_rep_sl2, from_matrices, shift_rep, standard_tensor,
                      trivial_rep, vector_rep_sl3, verify_relations)
from yrk.scalars import FLOAT

u = RatFun.x()
E12 = exact([[0, 1], [0, 0]])
E21 = exact([[0, 0], [1, 0]])
H = exact([[1, 0], [0, -1]])


def corrupted(V):
    return from_matrices(V.cartan, V.hbar, V.xi0, V.xp0, [m * Q(2) for m in V.xm0], V.t1)


def test_c2_at_zero_currents(c2_0):
    c = c2_0.currents(0)
    assert c.xi == RatMat.identity(2) + RatMat.const(H) * (1 / u)
    assert c.xp == RatMat.const(E12) * (1 / u)
    assert linalg.is_zero(c2_0.t1[0] - exact([[Fraction(-1, 2), 0], [0, Fraction(-1, 2)]]))
    # [t_1, x⁺_0] = 2 x⁺_1 and x⁺_1 vanishes at a = 0
    assert linalg.is_zero(linalg.commutator(c2_0.t1[0], c2_0.xp0[0]))


def test_resolvent_formula_generic_point():
    a, h = Q(Fraction(3, 2), 1), Q(Fraction(2, 3))
    V = evaluation_rep_sl2(a, h)
    xi = V.currents(0).xi
    assert xi == RatMat.identity(2) + RatMat.const(H) * RatFun.pole(a, coeff=h)


def test_shifted_currents_are_translated(c2_0):
    V = evaluation_rep_sl2(2, 1)
    assert V.pole_set() == [Q(2)]
    c0, c2 = c2_0.currents(0), V.currents(0)
    for name in ("xi", "xp", "xm"):
        assert getattr(c2, name) == getattr(c0, name).compose_linear(1, Q(-2))


def test_shift_group_action(c2_0):
    assert c2_0.shift(0).equals(c2_0)
    a, b = Q(Fraction(2, 5), -1), Q(3)
    assert shift_rep(c2_0, a).equals(evaluation_rep_sl2(a, 1))
    assert c2_0.shift(a).shift(b).equals(c2_0.shift(a + b))


def test_trivial_currents(triv):
    c = triv.currents(0)
    assert c.xi == RatMat.identity(1)
    assert c.xp.is_zero() and c.xm.is_zero()
    assert triv.pole_set() == []


@pytest.mark.parametrize("V", [evaluation_rep_sl2(0, 1), evaluation_rep_sl2(Q(-2, 1), Q(Fraction(1, 3))),
                               vector_rep_sl3(Q(1, 1), 1), trivial_rep("A2")])
def test_relations_hold_exactly(V):
    rep = verify_relations(V, samples=3)
    assert rep.passed
    assert rep.max_residual() == 0.0


def test_corrupted_rep_is_rejected(c2_0):
    # ξ(u) is rebuilt from [x⁺(u), x⁻_0], so the mismatch shows up in the zero modes and in Y3
    rep = verify_relations(corrupted(c2_0), samples=3)
    assert not rep.passed
    bad = {c.check_id for c in rep.failures()}
    assert {"zero_modes", "Y3"} <= bad
    assert max(c.residual for c in rep.failures()) > 0.1


def test_float_backend_relations():
    V = evaluation_rep_sl2(0.3 - 0.2j, 1.0)
    assert V.backend == FLOAT
    rep = verify_relations(V, samples=3)
    assert rep.passed and rep.max_residual() < 1e-12


def test_pole_sets(c2_0, c2_1):
    s = Q(Fraction(7, 3))
    T = standard_tensor(c2_0, c2_1, s)
    computed = T.computed_poles()
    assert set(computed) <= {s, Q(1)}
    assert evaluation_rep_sl2(Q(5)).computed_poles() == [Q(5)]


def test_standard_coproduct_of_t1(c2_0, c2_1):
    T = standard_tensor(c2_0, c2_1, 0)
    I = linalg.eye(2)
    expected = (linalg.kron(c2_0.t1[0], I) + linalg.kron(I, c2_1.t1[0])
                - linalg.kron(E21, E12) * Q(2))
    assert linalg.is_zero(T.t1[0] - expected)


def test_tensor_with_trivial_is_shift(c2_1, triv):
    s = Q(Fraction(-4, 7), 2)
    T = standard_tensor(c2_1, triv, s)
    assert T.equals(c2_1.shift(s))


def test_triple_tensor_is_a_module(c2_0, c2_1):
    T = standard_tensor(standard_tensor(c2_0, c2_1, Q(Fraction(1, 2))), evaluation_rep_sl2(Q(-1, 1)), 3)
    assert T.dim == 8
    assert verify_relations(T, samples=2).passed


def test_mode_shift_consistency(c2_1):
    assert check_mode_shift(c2_1) == 0.0
    assert check_mode_shift(vector_rep_sl3(Q(2))) == 0.0


def test_t_modes_from_log_xi(c2_1):
    t = c2_1.t_modes(0, 2)
    assert linalg.is_zero(t[0] - H)
    assert linalg.is_zero(t[1] - c2_1.t1[0])


def test_schema_errors(c2_0):
    with pytest.raises(SchemaError):
        from_matrices(c2_0.cartan, 1, c2_0.xi0 * 2, c2_0.xp0, c2_0.xm0, c2_0.t1)
    with pytest.raises(SchemaError):
        from_matrices(c2_0.cartan, 1, [np.zeros((2, 3), dtype=object)], c2_0.xp0, c2_0.xm0, c2_0.t1)
