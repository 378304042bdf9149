"""Matrices of rational functions and an exact fraction-free linear solver."""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import BackendMismatchError, PoleCollisionError, SingularSystemError
from .poly import Poly, exact_roots, poly_gcd
from .ratfun import RatFun
from .scalars import EXACT, FLOAT, QI, ZERO


class RatMat:
    """Immutable-by-convention matrix whose entries are :class:`RatFun`."""

    __slots__ = ("a", "backend")
    # make ``ndarray @ RatMat`` defer to RatMat.__rmatmul__
    __array_ufunc__ = None

    def __init__(self, entries, backend: str | None = None):
        a = np.array(entries, dtype=object)
        if a.ndim != 2:
            raise ValueError("RatMat needs a 2-d array")
        if backend is None:
            backend = a.flat[0].backend if a.size else EXACT
        for k, x in enumerate(a.flat):
            if not isinstance(x, RatFun):
                a.flat[k] = RatFun.const(x, backend)
            elif x.backend != backend:
                raise BackendMismatchError("RatMat entries mix scalar backends")
        self.a = a
        self.backend = backend

    @classmethod
    def _wrap(cls, a: np.ndarray, backend: str) -> "RatMat":
        obj = object.__new__(cls)
        obj.a = a
        obj.backend = backend
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, shape, backend: str = EXACT) -> "RatMat":
        a = np.empty(shape, dtype=object)
        z = RatFun.zero(backend)
        a.fill(z)
        return cls._wrap(a, backend)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "RatMat":
        out = cls.zeros((n, n), backend)
        one = RatFun.one(backend)
        for k in range(n):
            out.a[k, k] = one
        return out

    @classmethod
    def const(cls, m: np.ndarray) -> "RatMat":
        backend = linalg.backend_of_array(m)
        a = np.empty(m.shape, dtype=object)
        for idx, x in np.ndenumerate(m):
            a[idx] = RatFun.const(x, backend)
        return cls._wrap(a, backend)

    @classmethod
    def from_poly_coeffs(cls, coeffs: list[np.ndarray], den: Poly | None = None) -> "RatMat":
        """``sum_k coeffs[k] x^k / den`` with constant matrices ``coeffs``."""
        backend = linalg.backend_of_array(coeffs[0])
        shape = coeffs[0].shape
        if den is None:
            den = Poly.const(1, backend)
        a = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            a[idx] = RatFun(Poly([c[idx] for c in coeffs], backend), den)
        return cls._wrap(a, backend)

    # -- shape ------------------------------------------------------------
    @property
    def shape(self):
        return self.a.shape

    def __getitem__(self, idx):
        out = self.a[idx]
        if isinstance(out, np.ndarray):
            return RatMat._wrap(out, self.backend)
        return out

    @property
    def T(self) -> "RatMat":
        return RatMat._wrap(self.a.T.copy(), self.backend)

    def copy(self) -> "RatMat":
        return RatMat._wrap(self.a.copy(), self.backend)

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> "RatMat":
        if isinstance(other, RatMat):
            if other.backend != self.backend:
                raise BackendMismatchError("mixing exact and float rational matrices")
            return other
        if isinstance(other, np.ndarray):
            return RatMat.const(other)
        raise TypeError(f"cannot combine RatMat with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        return RatMat._wrap(self.a + other.a, self.backend)

    def __sub__(self, other):
        other = self._lift(other)
        return RatMat._wrap(self.a - other.a, self.backend)

    def __neg__(self):
        return RatMat._wrap(-self.a, self.backend)

    def __mul__(self, scalar):
        if isinstance(scalar, (RatMat, np.ndarray)):
            raise TypeError("use @ for matrix products")
        out = np.empty(self.a.shape, dtype=object)
        for idx, x in np.ndenumerate(self.a):
            out[idx] = x * scalar
        return RatMat._wrap(out, self.backend)

    __rmul__ = __mul__

    def __matmul__(self, other):
        other = self._lift(other)
        n, k = self.a.shape
        k2, m = other.a.shape
        if k != k2:
            raise ValueError("shape mismatch in RatMat product")
        out = np.empty((n, m), dtype=object)
        zero = RatFun.zero(self.backend)
        for i in range(n):
            row = self.a[i]
            nz = [t for t in range(k) if not row[t].is_zero()]
            for j in range(m):
                acc = zero
                for t in nz:
                    y = other.a[t, j]
                    if not y.is_zero():
                        acc = acc + row[t] * y
                out[i, j] = acc
        return RatMat._wrap(out, self.backend)

    def __rmatmul__(self, other):
        return self._lift(other) @ self

    def __eq__(self, other):
        if isinstance(other, (RatMat, np.ndarray)):
            other = self._lift(other)
            return self.a.shape == other.a.shape and all(
                x == y for x, y in zip(self.a.flat, other.a.flat)
            )
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.a.flat)

    def is_const(self) -> bool:
        return all(x.is_const() for x in self.a.flat)

    def const_value(self) -> np.ndarray:
        out = linalg.zeros(self.a.shape, self.backend)
        for idx, x in np.ndenumerate(self.a):
            out[idx] = x.const_value()
        return out

    # -- function-level operations ---------------------------------------
    def __call__(self, x) -> np.ndarray:
        """Evaluate entrywise; float arguments give a complex array."""
        backend = FLOAT if isinstance(x, (float, complex)) else self.backend
        out = linalg.zeros(self.a.shape, backend)
        den = self.common_den()
        dval = den(x) if backend == self.backend else den.to_complex()(x)
        if not dval:
            raise PoleCollisionError(f"evaluation at a pole {x}")
        for idx, f in np.ndenumerate(self.a):
            if not f.is_zero():
                out[idx] = f(x)
        return out

    def map(self, fn) -> "RatMat":
        out = np.empty(self.a.shape, dtype=object)
        for idx, f in np.ndenumerate(self.a):
            out[idx] = fn(f)
        backend = out.flat[0].backend if out.size else self.backend
        return RatMat._wrap(out, backend)

    def compose_linear(self, a, b) -> "RatMat":
        """Substitute ``x -> a*x + b`` in every entry."""
        return self.map(lambda f: f.compose_linear(a, b) if not f.is_const() else f)

    def derivative(self) -> "RatMat":
        return self.map(lambda f: f.derivative())

    def to_complex(self) -> "RatMat":
        return self.map(lambda f: f.to_complex())

    def common_den(self) -> Poly:
        den = Poly.const(1, self.backend)
        for f in self.a.flat:
            if f.den.degree > 0 and f.den != den:
                g = poly_gcd(den, f.den)
                den = den * (f.den.exact_div(g) if self.backend == EXACT else f.den // g)
        return den

    def poles(self) -> list:
        return exact_roots(self.common_den())

    def series_at_infinity(self, order: int) -> list[np.ndarray]:
        """Matrix coefficients of ``x^0 .. x^-order``."""
        out = [linalg.zeros(self.a.shape, self.backend) for _ in range(order + 1)]
        for idx, f in np.ndenumerate(self.a):
            if f.is_zero():
                continue
            for k, c in enumerate(f.series_at_infinity(order)):
                out[k][idx] = c
        return out

    def residue_at(self, p) -> np.ndarray:
        out = linalg.zeros(self.a.shape, self.backend)
        for idx, f in np.ndenumerate(self.a):
            if not f.is_zero() and f.den.degree > 0:
                out[idx] = f.residue_at(p)
        return out

    def laurent_at(self, p, m: int, order: int) -> list[np.ndarray]:
        """Matrix coefficients of ``(x-p)^{-m} .. (x-p)^{order}``."""
        out = [linalg.zeros(self.a.shape, self.backend) for _ in range(order + m + 1)]
        lin = Poly([-p, 1], self.backend)
        for idx, f in np.ndenumerate(self.a):
            if f.is_zero():
                continue
            # entries may have a lower pole order at p than m
            k = 0
            rest = f.den
            while k < m:
                q, r = rest.divmod(lin)
                if not r.is_zero():
                    break
                rest, k = q, k + 1
            if order + k < 0:
                continue
            coeffs = f.laurent_at(p, k, order)
            for j, c in enumerate(coeffs[: order + k + 1]):
                out[j + m - k][idx] = c
        return out

    def inverse(self) -> "RatMat":
        return rat_linear_solve(self, RatMat.identity(self.shape[0], self.backend))

    def __repr__(self):
        return f"RatMat(shape={self.shape}, backend={self.backend!r})"


def kron(a, b) -> RatMat:
    """Kronecker product where either factor may be a constant array."""
    if isinstance(a, np.ndarray):
        a = RatMat.const(a)
    if isinstance(b, np.ndarray):
        b = RatMat.const(b)
    n1, m1 = a.shape
    n2, m2 = b.shape
    out = RatMat.zeros((n1 * n2, m1 * m2), a.backend)
    for i in range(n1):
        for j in range(m1):
            x = a.a[i, j]
            if x.is_zero():
                continue
            block = out.a[i * n2:(i + 1) * n2, j * m2:(j + 1) * m2]
            for p in range(n2):
                for q in range(m2):
                    y = b.a[p, q]
                    if not y.is_zero():
                        block[p, q] = x * y
    return out


def conjugate(P: np.ndarray, M: RatMat) -> RatMat:
    """``P M P^{-1}`` for a permutation matrix ``P``."""
    perm = [int(np.nonzero([bool(x) for x in P[:, j]])[0][0]) for j in range(P.shape[1])]
    n = len(perm)
    out = RatMat.zeros((n, n), M.backend)
    for i in range(n):
        for j in range(n):
            out.a[perm[i], perm[j]] = M.a[i, j]
    return out


def rat_linear_solve(M: RatMat, b: RatMat) -> RatMat:
    """Solve ``M X = b`` exactly over the rational function field.

    Rows are cleared of denominators, then fraction-free (Bareiss)
    elimination and back substitution are carried out on polynomials.
    """
    if isinstance(b, np.ndarray):
        b = RatMat.const(b)
    n = M.shape[0]
    if M.shape != (n, n) or b.shape[0] != n:
        raise ValueError("rat_linear_solve needs a square system")
    backend = M.backend
    k = b.shape[1]
    rows = []
    for i in range(n):
        entries = list(M.a[i]) + list(b.a[i])
        den = Poly.const(1, backend)
        for f in entries:
            if f.den.degree > 0:
                g = poly_gcd(den, f.den)
                den = den * _pdiv(f.den, g)
        rows.append([_pdiv(f.num * den, f.den) for f in entries])
    A = rows
    prev = Poly.const(1, backend)
    sign = 1
    for c in range(n):
        p = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if p is None:
            raise SingularSystemError("matrix is identically singular")
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        for r in range(c + 1, n):
            arc = A[r][c]
            row_r, row_c = A[r], A[c]
            for j in range(c + 1, n + k):
                val = row_r[j] * piv - arc * row_c[j]
                row_r[j] = _pdiv(val, prev) if prev.degree > 0 or prev.lc() != 1 else val
            row_r[c] = Poly((), backend)
        prev = piv
    det = A[n - 1][n - 1]
    out = RatMat.zeros((n, k), backend)
    for col in range(k):
        y = [None] * n
        for i in range(n - 1, -1, -1):
            acc = A[i][n + col] * det
            for j in range(i + 1, n):
                if not A[i][j].is_zero():
                    acc = acc - A[i][j] * y[j]
            y[i] = _pdiv(acc, A[i][i])
        for i in range(n):
            out.a[i, col] = RatFun(y[i], det)
    return out


def _pdiv(a: Poly, b: Poly) -> Poly:
    if b.degree == 0:
        return a * (b.lc().inverse() if a.backend == EXACT else 1 / b.lc())
    if a.backend == EXACT:
        return a.exact_div(b)
    return a // b
