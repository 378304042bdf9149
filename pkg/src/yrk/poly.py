"""Univariate polynomials over the exact or floating scalar backend."""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BackendMismatchError, RootFindingError
from .scalars import EXACT, FLOAT, QI, ZERO, ONE, rationalize_complex

_NEG_INF = float("-inf")

#: relative size below which float coefficients are treated as zero
FLOAT_ZERO_TOL = 1e-14


def _infer_backend(coeffs: Sequence) -> str:
    backend = None
    for c in coeffs:
        if isinstance(c, (float, complex)):
            kind = FLOAT
        elif isinstance(c, int) or c is None:
            continue
        else:
            kind = EXACT
        if backend is None:
            backend = kind
        elif backend != kind:
            raise BackendMismatchError("polynomial mixes exact and float coefficients")
    return backend or EXACT


def _convert(c, backend: str):
    if backend == EXACT:
        return QI.coerce(c)
    return complex(c)


class Poly:
    """Polynomial with coefficients stored from low to high degree.

    The zero polynomial has an empty coefficient tuple and degree ``-inf``.
    """

    __slots__ = ("c", "backend")

    def __init__(self, coeffs: Iterable = (), backend: str | None = None):
        coeffs = list(coeffs)
        if backend is None:
            backend = _infer_backend(coeffs)
        self.backend = backend
        self.c = _strip([_convert(x, backend) for x in coeffs], backend)

    @classmethod
    def _raw(cls, coeffs: list, backend: str) -> "Poly":
        obj = object.__new__(cls)
        obj.backend = backend
        obj.c = _strip(coeffs, backend)
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value, backend: str = EXACT) -> "Poly":
        return cls([value], backend)

    @classmethod
    def x(cls, backend: str = EXACT) -> "Poly":
        return cls([0, 1], backend)

    @classmethod
    def linear(cls, a, b, backend: str = EXACT) -> "Poly":
        """``a*x + b``."""
        return cls([b, a], backend)

    @classmethod
    def from_roots(cls, roots: Iterable, backend: str = EXACT) -> "Poly":
        p = cls.const(1, backend)
        for r in roots:
            p = p * cls([-_convert(r, backend), 1], backend)
        return p

    # -- basic properties -----------------------------------------------
    @property
    def degree(self):
        return len(self.c) - 1 if self.c else _NEG_INF

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def lc(self):
        return self.c[-1] if self.c else self._zero()

    def coeff(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else self._zero()

    def _zero(self):
        return ZERO if self.backend == EXACT else 0j

    def _check(self, other: "Poly") -> None:
        if self.backend != other.backend:
            raise BackendMismatchError("mixing exact and float polynomials")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (float, complex)) and self.backend == EXACT:
            raise BackendMismatchError("mixing exact and float scalars")
        if isinstance(other, QI) and self.backend == FLOAT:
            raise BackendMismatchError("mixing exact and float scalars")
        return Poly([other], self.backend)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] = out[k] + v
        return Poly._raw(out, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-v for v in self.c], self.backend)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)) or (
                isinstance(other, QI) and self.backend == EXACT
            ) or (isinstance(other, (float, complex)) and self.backend == FLOAT):
                if not other:
                    return Poly._raw([], self.backend)
                return Poly._raw([v * other for v in self.c], self.backend)
            other = self._lift(other)
        self._check(other)
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw([], self.backend)
        out = [self._zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(out, self.backend)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.const(1, self.backend)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor) -> "Poly":
        return self * factor

    def monic(self) -> "Poly":
        if not self.c:
            return self
        lead = self.c[-1]
        if self.backend == EXACT:
            inv = lead.inverse()
            return Poly._raw([v * inv for v in self.c[:-1]] + [ONE], self.backend)
        return Poly._raw([v / lead for v in self.c[:-1]] + [1 + 0j], self.backend)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return Poly._raw([], self.backend), self
        lead = other.c[-1]
        inv = lead.inverse() if self.backend == EXACT else 1 / lead
        q = [self._zero()] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            coef = r[k] * inv
            q[k - db] = coef
            if coef:
                for j in range(db + 1):
                    r[k - db + j] = r[k - db + j] - coef * other.c[j]
        rem = r[:db]
        return Poly._raw(q, self.backend), Poly._raw(rem, self.backend)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.backend == other.backend and self.c == other.c
        if isinstance(other, (int, QI, complex, float, Fraction)):
            return self == Poly([other], self.backend) if not (
                isinstance(other, (float, complex)) and self.backend == EXACT
            ) else False
        return NotImplemented

    def __hash__(self):
        return hash((self.backend, tuple(self.c)))

    # -- calculus & evaluation --------------------------------------------
    def __call__(self, x):
        acc = self._zero()
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw([v * k for k, v in enumerate(self.c)][1:], self.backend)

    def compose_linear(self, a, b) -> "Poly":
        """Return ``p(a*x + b)``."""
        lin = Poly([b, a], self.backend)
        acc = Poly._raw([], self.backend)
        for v in reversed(self.c):
            acc = acc * lin + v
        return acc

    def taylor_at(self, p, order: int) -> list:
        """Coefficients of ``p(x + p)`` in powers of ``x`` up to ``order``."""
        shifted = self.compose_linear(1, p)
        return [shifted.coeff(k) for k in range(order + 1)]

    def to_complex(self) -> "Poly":
        if self.backend == FLOAT:
            return self
        return Poly._raw([complex(v) for v in self.c], FLOAT)

    def gcd(self, other: "Poly") -> "Poly":
        return poly_gcd(self, other)

    def roots_numeric(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.roots([complex(v) for v in reversed(self.c)])

    def __repr__(self):
        if not self.c:
            return "Poly(0)"
        return f"Poly({[str(v) for v in self.c]!r}, {self.backend!r})"


def _strip(coeffs: list, backend: str) -> list:
    if backend == FLOAT and coeffs:
        scale = max(abs(v) for v in coeffs)
        if scale == 0:
            return []
        cut = FLOAT_ZERO_TOL * scale
        coeffs = [v if abs(v) > cut else 0j for v in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd.  Exact Euclid for Q(i); for floats, shared roots are matched."""
    a._check(b)
    if a.backend == FLOAT:
        return _float_gcd(a, b)
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
        if not b.is_zero():
            b = b.monic()
    return a.monic() if not a.is_zero() else a


def _float_gcd(a: Poly, b: Poly, tol: float = 1e-9) -> Poly:
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ra = list(a.roots_numeric())
    rb = list(b.roots_numeric())
    common = []
    for r in ra:
        for k, q in enumerate(rb):
            if abs(r - q) <= tol * max(1.0, abs(r)):
                common.append((r + q) / 2)
                rb.pop(k)
                break
    return Poly.from_roots(common, FLOAT)


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return Poly.const(1, p.backend)
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic() if p.backend == EXACT else (p // g).monic()


def _try_exact_root(p: Poly, z: complex) -> QI | None:
    scale = max(1.0, abs(z))
    for den in (1, 2, 4, 10, 12, 100, 1000, 10**4, 10**6, 10**9):
        cand = rationalize_complex(z, den)
        if abs(complex(cand) - z) > 1e-6 * scale:
            continue
        if not p(cand):
            return cand
    return None


def exact_roots(p: Poly, allow_numeric: bool = False) -> list[tuple[object, int]]:
    """Roots of ``p`` with multiplicities.

    Exact backend: numeric root candidates are rationalised over Q(i) and
    certified by exact evaluation; if some root is not Gaussian-rational a
    warning is raised and numeric roots are returned for the remainder.
    Float backend: roots are clustered within ``1e-9``.
    """
    if p.degree < 1:
        return []
    if p.backend == FLOAT:
        return _cluster_roots(list(p.roots_numeric()))
    sf = squarefree_part(p)
    found: list[QI] = []
    rest = sf
    for z in sf.roots_numeric():
        if rest.degree < 1:
            break
        cand = _try_exact_root(rest, complex(z))
        if cand is not None and cand not in found:
            found.append(cand)
            rest = rest.exact_div(Poly([-cand, 1]))
    if rest.degree >= 1:
        # retry on the deflated remainder, whose roots are better conditioned
        for z in rest.roots_numeric():
            cand = _try_exact_root(rest, complex(z))
            if cand is not None:
                found.append(cand)
                rest = rest.exact_div(Poly([-cand, 1]))
    result = []
    for r in found:
        m = 0
        q = p
        lin = Poly([-r, 1])
        while True:
            quo, rem = q.divmod(lin)
            if not rem.is_zero():
                break
            m += 1
            q = quo
        result.append((r, m))
    if rest.degree >= 1:
        if not allow_numeric:
            raise RootFindingError(f"non-Gaussian-rational roots in {p!r}")
        warnings.warn(
            "polynomial has roots outside Q(i); falling back to numeric roots",
            RuntimeWarning,
            stacklevel=2,
        )
        q = p
        for r, m in result:
            q = q.exact_div(Poly([-r, 1]) ** m)
        result.extend(_cluster_roots(list(q.roots_numeric())))
    return result


def _cluster_roots(roots: list[complex], tol: float = 1e-7) -> list[tuple[complex, int]]:
    # numeric multiple roots split at roughly eps**(1/m), hence the loose default
    clusters: list[list[complex]] = []
    for r in roots:
        for cl in clusters:
            if abs(cl[0] - r) <= tol * max(1.0, abs(r)):
                cl.append(r)
                break
        else:
            clusters.append([r])
    out = []
    for cl in clusters:
        out.append((complex(sum(cl) / len(cl)), len(cl)))
    return out


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
