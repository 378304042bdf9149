from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q, exact
from yrk.errors import SchemaError
from yrk.poly import Poly
from yrk.ratfun import RatFun
from yrk.ratmat import RatMat, rat_linear_solve
from yrk.scalars import EXACT, FLOAT, QI, parse_scalar, rationalize_complex

x = RatFun.x()
one = RatFun.one()

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_qi_field_arithmetic():
    z = Q(1, 2)
    assert z * z.inverse() == Q(1)
    assert z.conjugate() == Q(1, -2)
    assert (z - z).is_real()
    assert complex(Q(Fraction(1, 2), -3)) == 0.5 - 3j


@given(small, small, small, small)
@settings(max_examples=60, deadline=None)
def test_qi_distributive(a, b, c, d):
    u, v, w = Q(a, b), Q(c, d), Q(b, c)
    assert u * (v + w) == u * v + u * w


@pytest.mark.parametrize("text,expected", [
    ("3/4", Q(Fraction(3, 4))),
    ("-2+i", Q(-2, 1)),
    ("1/2-3/5i", Q(Fraction(1, 2), Fraction(-3, 5))),
    ("i", Q(0, 1)),
])
def test_parse_exact(text, expected):
    assert parse_scalar(text, EXACT) == expected


def test_parse_float_and_errors():
    assert parse_scalar("0.25", FLOAT) == 0.25
    with pytest.raises(SchemaError):
        parse_scalar("one half", EXACT)


def test_rationalize():
    assert rationalize_complex(0.4 - 0.9j, 1000) == Q(Fraction(2, 5), Fraction(-9, 10))


def test_normalization_examples():
    assert RatFun.pole(0) + RatFun.pole(0) == RatFun.pole(0, coeff=2)
    assert (x / (x + 1)) * ((x + 1) / x) == one
    f = (x * x - 1) / (x + 1)
    assert f == x - 1 and f.is_poly()


def test_denominator_monic():
    f = RatFun(Poly([1]), Poly([2, 4]))
    assert f.den.lc() == Q(1)
    assert f == RatFun.pole(Q(Fraction(-1, 2)), coeff=Q(Fraction(1, 4)))


def test_partial_fractions_two_simple_poles():
    quo, parts = (one / (x * (x - 1))).partial_fractions()
    assert quo.is_zero()
    assert parts == {Q(0): [Q(-1)], Q(1): [Q(1)]}


def test_partial_fractions_cover_up():
    # independent: cover-up gives residue (2p)/(p + other) at each p = ±1
    _, parts = ((x * 2) / (x * x - 1)).partial_fractions()
    assert parts == {Q(1): [Q(1)], Q(-1): [Q(1)]}


def test_partial_fractions_double_pole():
    _, parts = (one / (x * x)).partial_fractions()
    assert parts == {Q(0): [Q(0), Q(1)]}


def test_residues():
    assert RatFun.pole(0).residue_at(Q(0)) == Q(1)
    assert RatFun.pole(2, order=2).residue_at(Q(2)) == Q(0)
    # ∮ v^0 x⁺(v) dv on ℂ²(0): the scalar coefficient ħ/v has residue ħ
    assert RatFun.pole(0, coeff=3).residue_at(Q(0)) == Q(3)


def test_series_at_infinity():
    a = Q(Fraction(2, 3))
    assert RatFun.pole(a).series_at_infinity(3) == [Q(0), Q(1), a, a * a]
    A = (x * (x + 2)) / ((x + 1) * (x + 1))
    assert A.series_at_infinity(2) == [Q(1), Q(0), Q(-1)]
    assert one.series_at_infinity(2) == [Q(1), Q(0), Q(0)]


@given(small, small, st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_partial_fraction_reassembly(p, c, m):
    # pole of order m at p plus a shifted simple pole; reassemble from the parts
    f = RatFun.pole(Q(p), m, Q(c) + 1) + RatFun.pole(Q(p) + 1)
    quo, parts = f.partial_fractions()
    g = RatFun(quo)
    for pole, cs in parts.items():
        for k, ck in enumerate(cs, start=1):
            if ck != Q(0):
                g = g + RatFun.pole(pole, k, ck)
    assert g == f


def test_float_backend_matches_exact():
    f = (x * (x + 2)) / ((x + 1) * (x + 1))
    g = f.to_complex()
    assert g.backend == FLOAT
    for s in (0.5, 3 + 1j):
        assert abs(g(s) - complex(f(rationalize_complex(s, 10)))) < 1e-14


def test_linear_solve_examples():
    M = RatMat([[x]])
    assert rat_linear_solve(M, RatMat.identity(1)) == RatMat([[one / x]])
    N = exact([[0, 1], [0, 0]])
    M = RatMat.identity(2) * x - RatMat.const(N)
    expected = RatMat.identity(2) * (one / x) + RatMat.const(N) * (one / (x * x))
    assert rat_linear_solve(M, RatMat.identity(2)) == expected
    b = RatMat([[x, one], [one / (x + 2), Q(3) * one]])
    assert rat_linear_solve(RatMat.identity(2), b) == b


def test_ratmat_inverse_roundtrip():
    M = RatMat([[x + 1, one], [one / x, x]])
    assert M @ M.inverse() == RatMat.identity(2)
