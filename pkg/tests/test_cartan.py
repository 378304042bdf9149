from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from conftest import Q, exact
from yrk import linalg
from yrk.cartan import CartanData, LaurentPoly, omega_h, r_tensor, r_tensor_h
from yrk.errors import MathDomainError, SchemaError
from yrk.repn import realization

TYPES = ["A1", "A2", "B2", "C2"]


def brute_nu(cd: CartanData, beta) -> int:
    # smallest multiset of positive roots adding up to beta
    for k in range(sum(beta) + 1):
        for combo in itertools.combinations_with_replacement(cd.positive_roots, k):
            if tuple(map(sum, zip(*combo))) == tuple(beta) or (k == 0 and not any(beta)):
                return k
    raise AssertionError


def test_root_counts_and_invariants():
    expected = {"A1": (1, 2, 1), "A2": (3, 3, 1), "B2": (4, 3, 2), "C2": (4, 3, 2)}
    for name, (nroots, hdual, m) in expected.items():
        cd = CartanData.of_type(name)
        assert len(cd.positive_roots) == nroots
        assert cd.computed_hdual() == hdual and cd.computed_m() == m
        assert cd.ell == m * hdual


def test_nu_examples():
    a1, a2 = CartanData.of_type("A1"), CartanData.of_type("A2")
    assert a1.nu_min_decomposition((0,)) == 0
    assert a1.nu_min_decomposition((1,)) == 1
    assert a2.nu_min_decomposition((1, 1)) == 1
    assert a2.nu_min_decomposition((2, 1)) == 2


@pytest.mark.parametrize("name", TYPES)
def test_nu_matches_enumeration(name):
    cd = CartanData.of_type(name)
    for beta in itertools.product(range(4), repeat=cd.rank):
        assert cd.nu_min_decomposition(beta) == brute_nu(cd, beta), beta


def test_nu_rejects_negative():
    with pytest.raises(MathDomainError):
        CartanData.of_type("A2").nu_min_decomposition((1, -1))


def test_coupling_matrix_sl2_sl3():
    assert CartanData.of_type("A1").q_coupling_matrix() == [[LaurentPoly.const(1)]]
    two = LaurentPoly.qnum(2)
    one = LaurentPoly.const(1)
    assert CartanData.of_type("A2").q_coupling_matrix() == [[two, one], [one, two]]


@pytest.mark.parametrize("name", TYPES)
def test_coupling_matrix_defining_identity(name):
    # c(q) ([d_i a_ij]_q) = [ℓ]_q, checked by Laurent multiplication
    cd = CartanData.of_type(name)
    c = cd.q_coupling_matrix()
    n = cd.rank
    for i in range(n):
        for k in range(n):
            acc = LaurentPoly.const(0)
            for j in range(n):
                acc = acc + c[i][j] * LaurentPoly.qnum(cd.B[j][k])
            target = LaurentPoly.qnum(cd.ell) if i == k else LaurentPoly.const(0)
            assert acc == target
        for j in range(n):
            assert c[i][j].is_symmetric() and c[i][j].has_nonneg_integer_coeffs()


@pytest.mark.parametrize("name", TYPES)
def test_coupling_at_q1_gives_fundamental_coweights(name):
    cd = CartanData.of_type(name)
    z = realization(cd)
    c = cd.q_coupling_matrix()
    for i in range(cd.rank):
        lhs = sum((z.h[j] * Q(c[i][j].at(1) * cd.d[j]) for j in range(cd.rank)), z.h[0] * Q(0))
        coweight = sum((z.h[k] * Q(cd.A_inv[i][k]) for k in range(cd.rank)), z.h[0] * Q(0))
        assert linalg.is_zero(lhs - coweight * Q(cd.ell))


def test_r_tensor_sl2():
    z = realization(CartanData.of_type("A1"))
    E21_E12 = linalg.kron(exact([[0, 0], [1, 0]]), exact([[0, 1], [0, 0]]))
    r = r_tensor(z.roots, z.xp, z.xm, z.xp, z.xm)
    assert linalg.is_zero(r - E21_E12)
    rh = r_tensor_h(z.cartan, z.roots, z.xp, z.xm, z.xp, z.xm, [Q(2)])
    assert linalg.is_zero(rh + E21_E12 * Q(2))


def test_omega_h_sl2_highest_weight():
    cd = CartanData.of_type("A1")
    z = realization(cd)
    om = omega_h(cd, z.xi, z.xi)
    assert om[0, 0] == Q(Fraction(1, 2))
    assert linalg.is_zero(om - exact([[Fraction(1, 2), 0, 0, 0], [0, Fraction(-1, 2), 0, 0],
                                      [0, 0, Fraction(-1, 2), 0], [0, 0, 0, Fraction(1, 2)]]))


@pytest.mark.parametrize("name", TYPES)
def test_root_vectors_are_dual(name):
    z = realization(CartanData.of_type(name))
    for rv in z.roots:
        xm, xp = z.root_matrices(rv.beta)
        assert z.form(xm, xp) == Q(1)


def test_form_normalization_short_root():
    for name in TYPES:
        cd = CartanData.of_type(name)
        z = realization(cd)
        i = cd.d.index(1)
        # (α_i, α_i) = 2 for short simple roots means κ tr(h_i h_i) = 2
        assert z.form(z.h[i], z.h[i]) == Q(2)


def test_bad_cartan_data():
    with pytest.raises(SchemaError):
        CartanData(((2, -1), (-2, 2)), (1, 1), 3, 2)
    with pytest.raises(SchemaError):
        CartanData.of_type("E9")
    with pytest.raises(SchemaError):
        CartanData.from_json({"cartan": [[2]], "d": [1], "hdual": 3, "m": 1})
