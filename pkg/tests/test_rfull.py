from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import Q, as_complex, exact
from yrk import linalg
from yrk.repn import evaluation_rep_sl2, trivial_rep, vector_rep_sl3
from yrk.rfull import (MeromorphicRMatrix, asymptotic_report, casimir, check_full_cabling_unitarity,
                       check_one_jet, check_qybe, check_qybe_abelian, check_shift_covariance)

P4 = as_complex(linalg.flip_matrix(2, 2))
POINTS = [2.3 + 1.0j, -3.1 + 0.5j, 0.7 - 4.2j]


def c2(a):
    return evaluation_rep_sl2(a, 1)


def triple():
    return c2(0), c2(Q(Fraction(2, 5))), c2(Q(Fraction(-9, 10)))


def test_casimir_is_flip_minus_half(c2_0):
    # Ω_g on ℂ²⊗ℂ² equals P - 1/2
    expected = linalg.flip_matrix(2, 2) - linalg.eye(4) * Q(Fraction(1, 2))
    assert linalg.is_zero(casimir(c2_0, c2_0) - expected)


def test_full_one_jet(c2_0, c2_1):
    R = MeromorphicRMatrix(c2_0, c2_1)
    ser = R.series(2)
    assert linalg.is_zero(ser.coeff(1) - casimir(c2_0, c2_1))
    assert check_one_jet(c2_0, c2_1).passed
    assert check_one_jet(vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))).passed


@pytest.mark.parametrize("direction", ["up", "down"])
def test_yang_r_matrix(c2_0, direction):
    # R(s) is a scalar multiple of 1 + ħP/s on ℂ²(0)⊗ℂ²(0)
    R = MeromorphicRMatrix(c2_0, c2_0, direction)
    for s in POINTS:
        X = R(s) @ np.linalg.inv(np.eye(4) + P4 / s)
        assert linalg.max_abs(X - X[0, 0] * np.eye(4)) < 1e-12


def test_highest_weight_entry_gamma_quotient(c2_0):
    R = MeromorphicRMatrix(c2_0, c2_0, "up")
    s = 5.0
    g = mpmath.gamma
    assert abs(R(s)[0, 0] - complex(g(s / 2) * g(s / 2 + 1) / g((s + 1) / 2) ** 2)) < 1e-12


def test_trivial_factor_gives_identity(c2_1):
    R = MeromorphicRMatrix(trivial_rep("A1"), c2_1)
    for s in POINTS:
        assert linalg.max_abs(R(s) - np.eye(2)) < 1e-14


@pytest.mark.parametrize("direction", ["up", "down"])
def test_shift_covariance(c2_0, c2_1, direction):
    rep = check_shift_covariance(c2_0, c2_1, Q(Fraction(1, 2)), Q(Fraction(-3, 4), 1), POINTS, direction)
    assert rep.passed, rep.summary()


def test_qybe_reference_point():
    rep = check_qybe(*triple(), "up", samples=[(3.1, 2.7)], tol=1e-7)
    assert rep.passed and rep.max_residual() < 1e-7


@pytest.mark.parametrize("direction", ["up", "down"])
def test_qybe_seeded(direction):
    assert check_qybe(*triple(), direction, count=3, seed=3).passed


def test_qybe_sl3():
    V = [vector_rep_sl3(0), vector_rep_sl3(Q(Fraction(1, 2), 1)), vector_rep_sl3(Q(-1))]
    assert check_qybe(*V, "up", count=1, seed=1).passed


def test_qybe_with_trivial_middle():
    V1, _, V3 = triple()
    rep = check_qybe(V1, trivial_rep("A1"), V3, "up", samples=[(3.1, 2.7)])
    assert rep.max_residual() < 1e-13


@pytest.mark.parametrize("direction", ["up", "down"])
def test_qybe_abelian(direction):
    assert check_qybe_abelian(*triple(), direction, count=2).passed


@pytest.mark.parametrize("direction", ["up", "down"])
def test_cabling_intertwiner_unitarity(direction):
    rep = check_full_cabling_unitarity(*triple(), direction, count=2, seed=5)
    assert rep.passed, rep.summary()
    assert {c.check_id for c in rep.checks} >= {"cabling_left", "cabling_right", "intertwiner", "unitarity"}


@pytest.mark.parametrize("direction", ["up", "down"])
def test_asymptotic_expansion(c2_0, c2_1, direction):
    rep = asymptotic_report(c2_0, c2_1, direction, order=4, points=(50,))
    assert rep.passed, rep.summary()


def test_corrupted_rminus_breaks_qybe():
    V1, V2, V3 = triple()
    bad = MeromorphicRMatrix(V1, V2).minus
    bad = bad + (bad - bad.identity(4))
    rep = check_qybe(V1, V2, V3, "up", samples=[(3.1, 2.7)], rminus12=bad)
    assert not rep.passed and rep.max_residual() > 1e-3


def test_bad_direction(c2_0):
    with pytest.raises(ValueError):
        MeromorphicRMatrix(c2_0, c2_0, "sideways")
