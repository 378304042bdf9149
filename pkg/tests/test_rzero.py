from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import Q, as_complex
from yrk import linalg
from yrk.cartan import omega_h
from yrk.drinfeld import drinfeld_tensor
from yrk.errors import PoleCollisionError
from yrk.ratfun import RatFun
from yrk.ratmat import RatMat
from yrk.repn import evaluation_rep_sl2, standard_tensor, vector_rep_sl3
from yrk.rzero import (A_series, abelian_A, abelian_A_quadrature, asymptotic_errors,
                       check_difference_and_unitarity, check_rzero_cabling, eta0, g_series,
                       monodromy_eta0, rzero_formal, rzero_formal_diagonal, rzero_updown,
                       shift_scalar_series)
from yrk.series import PowerSeries

s = RatFun.x()
SAMPLES = [2.3 + 0.4j, -1.7 + 1.1j, 0.45 - 2.2j]


def c2(a):
    return evaluation_rep_sl2(a, 1)


def flip(d1, d2):
    return linalg.flip_matrix(d1, d2)


def test_A_highest_weight_eigenvalue(c2_0):
    A = abelian_A(c2_0, c2_0)
    M = A.ratmat()
    assert M.a[0, 0] == s * (s + 2) / ((s + 1) * (s + 1))
    # A is diagonal on the weight basis of ℂ²⊗ℂ²
    for (r, c), f in np.ndenumerate(M.a):
        if r != c:
            assert f.is_zero()


def test_A_trivial(c2_1, triv):
    assert abelian_A(triv, c2_1).ratmat() == RatMat.identity(2)
    assert abelian_A(c2_1, triv).ratmat() == RatMat.identity(2)


def test_A_two_jet(c2_0, c2_1):
    ser = A_series(abelian_A(c2_0, c2_1), 2)
    assert linalg.is_zero(ser.coeff(0) - linalg.eye(4))
    assert linalg.is_zero(ser.coeff(1))
    assert ser.coeff(2)[0, 0] != Q(0)


@pytest.mark.parametrize("pair", [(c2(0), c2(Q(Fraction(13, 10)))),
                                  (evaluation_rep_sl2(0, Q(2, 3)), evaluation_rep_sl2(3, Q(2, 3))),
                                  (vector_rep_sl3(0, 2), vector_rep_sl3(1, 2)),
                                  (vector_rep_sl3(0), vector_rep_sl3(Q(1, 1)))])
def test_A_two_jet_is_cartan_casimir(pair):
    # A(s) = 1 - ℓħ²Ω_𝔥 s⁻² + O(s⁻³)
    V, W = pair
    coeff = A_series(abelian_A(V, W), 2).coeff(2)
    oh = omega_h(V.cartan, V.xi0, W.xi0)
    assert linalg.is_zero(coeff + oh * (V.hbar * V.hbar * V.cartan.ell))


@pytest.mark.parametrize("pair", [(c2(0), c2(Q(Fraction(13, 10)))),
                                  (vector_rep_sl3(0), vector_rep_sl3(Q(1, 1))),
                                  (c2(Q(0, 1)), drinfeld_tensor(c2(1), c2(-1), 0))])
def test_A_matches_contour_integral(pair):
    A = abelian_A(*pair)
    for pt in (4.5 + 1.5j, -3.25 + 6j):
        assert linalg.max_abs(A(pt) - abelian_A_quadrature(*pair, pt)) < 1e-10


@pytest.mark.parametrize("a,b", [(Q(Fraction(7, 10)), Q(Fraction(-21, 10))), (Q(0), Q(Fraction(1, 3), 1))])
def test_A_on_standard_tensor(a, b):
    # the ξ spectrum of a standard tensor need not lie in Q(i)
    V = standard_tensor(c2(a), c2(b), 0)
    A = abelian_A(c2(0), V)
    pt = 3.3 - 2.1j
    assert linalg.max_abs(A(pt) - abelian_A_quadrature(c2(0).to_float(), V.to_float(), pt)) < 1e-9


def test_gamma_oracle_at_five(c2_0):
    A = abelian_A(c2_0, c2_0)
    g = mpmath.gamma
    expected = complex(g(2.5) * g(3.5) / g(3) ** 2)
    for tail in ("zeta", "gamma"):
        val = rzero_updown(A, 5.0, "up", tol=1e-13, tail=tail).matrix[0, 0]
        assert abs(val - expected) < 1e-12


def test_tails_agree(c2_0, c2_1):
    A = abelian_A(c2_0, c2_1)
    for pt in SAMPLES:
        for direction in ("up", "down"):
            z = rzero_updown(A, pt, direction, tail="zeta").matrix
            g = rzero_updown(A, pt, direction, tail="gamma").matrix
            assert linalg.max_abs(z - g) < 1e-11
    crude = rzero_updown(A, SAMPLES[0], "up", tail="none", cap=20000)
    assert linalg.max_abs(crude.matrix - rzero_updown(A, SAMPLES[0], "up").matrix) < 10 * crude.tail + 1e-9


@pytest.mark.parametrize("pair", [(c2(0), c2(Q(Fraction(2, 5)))),
                                  (vector_rep_sl3(0), vector_rep_sl3(Q(Fraction(1, 2), 1)))])
def test_difference_equation_and_unitarity(pair):
    rep = check_difference_and_unitarity(*pair, SAMPLES)
    assert rep.passed, rep.summary()


def test_lattice_pole_is_rejected(c2_0):
    A = abelian_A(c2_0, c2_0)
    with pytest.raises(PoleCollisionError):
        rzero_updown(A, -4.0, "up")


def test_g_series_values():
    assert g_series(7) == [0, 1, Fraction(1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]


def test_g_series_defining_property():
    N = 12
    g = g_series(N)
    diff = [a - b for a, b in zip(shift_scalar_series(g, 1), g)]
    diff[2] += 1
    assert all(d == 0 for d in diff[: N + 1])


def test_g_series_antisymmetry():
    g = shift_scalar_series(g_series(11), Fraction(1, 2))
    assert all(g[k] == 0 for k in range(0, 12, 2))


def test_g_series_trigamma():
    g = g_series(12)
    x = 40.0
    approx = sum(float(c) * x ** -k for k, c in enumerate(g))
    assert abs(approx - float(mpmath.psi(1, x))) < 1e-17 * 1e3


def test_formal_one_jet(c2_0, c2_1):
    R = rzero_formal(c2_0, c2_1, 2)
    assert linalg.is_zero(R.coeff(0) - linalg.eye(4))
    assert R.coeff(1)[0, 0] == Q(Fraction(1, 2))
    oh = omega_h(c2_0.cartan, c2_0.xi0, c2_1.xi0)
    assert linalg.is_zero(R.coeff(1) - oh * c2_0.hbar)


@pytest.mark.parametrize("pair", [(c2(0), c2(Q(Fraction(13, 10), 1))),
                                  (vector_rep_sl3(0), vector_rep_sl3(Q(1, 1)))])
def test_formal_matches_blockwise_solution(pair):
    R = rzero_formal(*pair, 5)
    D = rzero_formal_diagonal(abelian_A(*pair), 5)
    assert R.equals(D)


def test_formal_difference_equation(c2_0, c2_1):
    order = 5
    A = abelian_A(c2_0, c2_1)
    R = rzero_formal(c2_0, c2_1, order)
    lhs = R.shift(A.period)
    rhs = A_series(A, order) @ R
    assert lhs.equals(rhs.truncate(order))


def test_formal_unitarity(c2_0, c2_1):
    order = 5
    R = rzero_formal(c2_0, c2_1, order)
    R21 = rzero_formal(c2_1, c2_0, order)
    P = flip(2, 2)
    assert R.inverse().equals(R21.negate_variable().conj_by(P))


def test_asymptotic_errors_decrease(c2_0, c2_1):
    errs = asymptotic_errors(c2_0, c2_1, 40.0, 4)
    assert all(b < a / 5 for a, b in zip(errs, errs[1:]))


def test_eta_periodic_and_nonconstant(c2_0):
    rep = monodromy_eta0(c2_0, c2_0, [0.3, 0.7, 1.1])
    assert rep.passed


def test_eta_trivial(c2_1, triv):
    A = abelian_A(triv, c2_1)
    assert linalg.max_abs(eta0(A, 0.77 + 0.1j) - np.eye(2)) < 1e-14


def test_rzero_cabling():
    V1, V2, V3 = c2(0), c2(Q(Fraction(2, 5))), c2(Q(Fraction(-9, 10)))
    points = {"up": (Q(Fraction(31, 10)), Q(Fraction(27, 10))),
              "down": (Q(Fraction(31, 10), Fraction(1, 3)), Q(Fraction(27, 10), Fraction(-1, 5)))}
    for direction, (s1, s2) in points.items():
        rep = check_rzero_cabling(V1, V2, V3, s1, s2, direction)
        assert rep.passed, rep.summary()


def test_rzero_shift_covariance(c2_0, c2_1):
    a = Q(Fraction(3, 2))
    for direction in ("up", "down"):
        lhs = rzero_updown(abelian_A(c2_0.shift(a), c2_1), 2.2 + 0.3j, direction).matrix
        rhs = rzero_updown(abelian_A(c2_0, c2_1), 3.7 + 0.3j, direction).matrix
        assert linalg.max_abs(lhs - rhs) < 1e-12


def test_rzero_intertwiner(c2_0, c2_1):
    sv = Q(Fraction(17, 5), Fraction(1, 3))
    D12 = drinfeld_tensor(c2_0.shift(sv), c2_1, 0)
    D21 = drinfeld_tensor(c2_1, c2_0.shift(sv), 0)
    P = as_complex(flip(2, 2))
    for direction in ("up", "down"):
        M = P @ rzero_updown(abelian_A(c2_0, c2_1), complex(sv), direction).matrix
        for key, mats in D12.generators().items():
            for a, b in zip(mats, D21.generators()[key]):
                assert linalg.max_abs(M @ as_complex(a) - as_complex(b) @ M) < 1e-11, key
