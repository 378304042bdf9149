"""Rational functions of one variable, reduced with a monic denominator."""

from __future__ import annotations

from fractions import Fraction

from .errors import BackendMismatchError, PoleCollisionError
from .poly import Poly, exact_roots, poly_gcd
from .scalars import EXACT, FLOAT, QI, ZERO


class RatFun:
    """``num/den`` with ``den`` monic and, in the exact backend, coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        if not isinstance(num, Poly):
            num = Poly([num]) if not isinstance(num, (float, complex)) else Poly([num], FLOAT)
        if den is None:
            den = Poly.const(1, num.backend)
        elif not isinstance(den, Poly):
            den = Poly([den], num.backend)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFun":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value, backend: str = EXACT) -> "RatFun":
        return cls._raw(Poly.const(value, backend), Poly.const(1, backend))

    @classmethod
    def zero(cls, backend: str = EXACT) -> "RatFun":
        return cls._raw(Poly((), backend), Poly.const(1, backend))

    @classmethod
    def one(cls, backend: str = EXACT) -> "RatFun":
        return cls.const(1, backend)

    @classmethod
    def x(cls, backend: str = EXACT) -> "RatFun":
        return cls._raw(Poly.x(backend), Poly.const(1, backend))

    @classmethod
    def pole(cls, p, order: int = 1, coeff=1, backend: str = EXACT) -> "RatFun":
        """``coeff / (x - p)**order``."""
        return cls(Poly([coeff], backend), Poly([-p, 1], backend) ** order)

    @property
    def backend(self) -> str:
        return self.num.backend

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def is_const(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def const_value(self):
        if not self.is_const():
            raise ValueError("rational function is not constant")
        return self.num.coeff(0)

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            if other.backend != self.backend:
                raise BackendMismatchError("mixing exact and float rational functions")
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        if isinstance(other, (float, complex)) and self.backend == EXACT:
            raise BackendMismatchError("mixing exact and float scalars")
        if isinstance(other, QI) and self.backend == FLOAT:
            raise BackendMismatchError("mixing exact and float scalars")
        return RatFun.const(other, self.backend)

    def __add__(self, other):
        other = self._lift(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        if self.den.degree == 0:
            return RatFun._raw(self.num * other.den + other.num, other.den)
        if other.den.degree == 0:
            return RatFun._raw(self.num + other.num * self.den, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            num = self.num * other.den + other.num * self.den
            return RatFun(num, self.den * other.den)
        a = self.den.exact_div(g) if self.backend == EXACT else self.den // g
        b = other.den.exact_div(g) if self.backend == EXACT else other.den // g
        return RatFun(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RatFun, Poly)):
            if isinstance(other, (int, Fraction)) or (
                isinstance(other, QI) and self.backend == EXACT
            ) or (isinstance(other, (float, complex)) and self.backend == FLOAT):
                if not other:
                    return RatFun.zero(self.backend)
                return RatFun._raw(self.num * other, self.den)
        other = self._lift(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFun.zero(self.backend)
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFun._raw(self.num * other.num, self.den)
        # cross-cancel before multiplying keeps degrees small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = _div(self.num, g1), _div(other.den, g1)
        n2, d1 = _div(other.num, g2), _div(self.den, g2)
        num = n1 * n2
        den = d1 * d2
        lead = den.lc()
        if lead != 1:
            inv = lead.inverse() if self.backend == EXACT else 1 / lead
            num, den = num * inv, den * inv
        return RatFun._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFun._raw(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, QI, Fraction, Poly)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation and calculus ------------------------------------------
    def __call__(self, x):
        if isinstance(x, (float, complex)) and self.backend == EXACT:
            return self.to_complex()(x)
        d = self.den(x)
        if not d:
            raise PoleCollisionError(f"evaluation at a pole {x}")
        return self.num(x) / d

    def to_complex(self) -> "RatFun":
        if self.backend == FLOAT:
            return self
        return RatFun._raw(self.num.to_complex(), self.den.to_complex())

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def compose_linear(self, a, b) -> "RatFun":
        """``f(a*x + b)``."""
        return RatFun(self.num.compose_linear(a, b), self.den.compose_linear(a, b))

    def poles(self) -> list:
        """Poles with multiplicity as ``[(p, m), ...]``."""
        return exact_roots(self.den)

    # -- expansions -------------------------------------------------------
    def series_at_infinity(self, order: int) -> list:
        """Coefficients ``[c_0, ..., c_N]`` with ``f = sum c_k x^{-k} + O(x^{-N-1})``.

        Raises ``ValueError`` if ``f`` has a pole at infinity.
        """
        dn, dd = self.num.degree, self.den.degree
        zero = ZERO if self.backend == EXACT else 0j
        if self.num.is_zero():
            return [zero] * (order + 1)
        if dn > dd:
            raise ValueError("rational function has a pole at infinity")
        shift = dd - dn
        # in w = 1/x: f = w^shift * N~(w)/D~(w) with reversed coefficient lists
        nrev = list(reversed(self.num.c))
        drev = list(reversed(self.den.c))
        out = [zero] * (order + 1)
        inv0 = drev[0].inverse() if self.backend == EXACT else 1 / drev[0]
        q = []
        for k in range(order + 1 - shift):
            acc = nrev[k] if k < len(nrev) else zero
            for j in range(1, min(k, len(drev) - 1) + 1):
                acc = acc - drev[j] * q[k - j]
            q.append(acc * inv0)
        for k, v in enumerate(q):
            out[k + shift] = v
        return out

    def taylor_at(self, p, order: int) -> list:
        """Taylor coefficients at a regular point ``p`` up to ``order``."""
        nt = self.num.taylor_at(p, order)
        dt = self.den.taylor_at(p, order)
        return _series_div(nt, dt, order, self.backend)

    def partial_fractions(self, poles=None) -> tuple[Poly, dict]:
        """Return ``(polynomial part, {p: [c_1, ..., c_m]})``.

        ``f(x) = poly(x) + sum_p sum_k c_k / (x - p)^k``.  ``poles`` may be
        supplied as ``[(p, m), ...]`` to avoid root finding.
        """
        if poles is None:
            poles = self.poles()
        quo, rem = self.num.divmod(self.den)
        out = {}
        for p, m in poles:
            lin = Poly([-p, 1], self.backend)
            rest = self.den
            for _ in range(m):
                rest = _div(rest, lin)
            nt = rem.taylor_at(p, m - 1)
            et = rest.taylor_at(p, m - 1)
            g = _series_div(nt, et, m - 1, self.backend)
            out[p] = [g[m - 1 - (k - 1)] for k in range(1, m + 1)]
        return quo, out

    def residue_at(self, p) -> object:
        """Coefficient of ``(x - p)^-1`` in the Laurent expansion at ``p``."""
        lin = Poly([-p, 1], self.backend)
        m = 0
        rest = self.den
        while True:
            q, r = rest.divmod(lin)
            if not r.is_zero():
                break
            rest = q
            m += 1
        if m == 0:
            return ZERO if self.backend == EXACT else 0j
        nt = self.num.taylor_at(p, m - 1)
        et = rest.taylor_at(p, m - 1)
        return _series_div(nt, et, m - 1, self.backend)[m - 1]

    def laurent_at(self, p, m: int, order: int) -> list:
        """Coefficients of ``(x-p)^{-m} ... (x-p)^{order}`` given a pole of order ``m`` at ``p``."""
        lin = Poly([-p, 1], self.backend)
        rest = self.den
        for _ in range(m):
            rest = _div(rest, lin)
        nt = self.num.taylor_at(p, order + m)
        et = rest.taylor_at(p, order + m)
        return _series_div(nt, et, order + m, self.backend)

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self):
        return f"({_fmt(self.num)})/({_fmt(self.den)})" if not self.is_poly() else _fmt(self.num)


def _fmt(p: Poly) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k, v in enumerate(p.c):
        if not v:
            continue
        terms.append(f"{v}" if k == 0 else f"({v})*x^{k}")
    return " + ".join(terms)


def _div(a: Poly, b: Poly) -> Poly:
    if b.degree == 0 and b.lc() == 1:
        return a
    if a.backend == EXACT:
        return a.exact_div(b)
    return a // b


def _series_div(n: list, d: list, order: int, backend: str) -> list:
    zero = ZERO if backend == EXACT else 0j
    inv0 = d[0].inverse() if backend == EXACT else 1 / d[0]
    q = []
    for k in range(order + 1):
        acc = n[k] if k < len(n) else zero
        for j in range(1, min(k, len(d) - 1) + 1):
            acc = acc - d[j] * q[k - j]
        q.append(acc * inv0)
    return q


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(1, num.backend)
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = _div(num, g), _div(den, g)
    lead = den.lc()
    if lead != 1:
        inv = lead.inverse() if num.backend == EXACT else 1 / lead
        num, den = num * inv, den * inv
    return num, den


def from_series_check(f: RatFun, coeffs: list) -> bool:
    """True if ``coeffs`` agree with the expansion of ``f`` at infinity."""
    return f.series_at_infinity(len(coeffs) - 1) == list(coeffs)


def as_ratfun(value, backend: str = EXACT) -> RatFun:
    if isinstance(value, RatFun):
        return value
    if isinstance(value, Poly):
        return RatFun(value)
    return RatFun.const(value, backend)

