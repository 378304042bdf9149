"""Scalar backends: exact Gaussian rationals and complex doubles.

The exact backend is :class:`QI`, an element of Q(i) stored as a pair of
``gmpy2.mpq``.  The float backend is the builtin :class:`complex`.  Python
``int`` and :class:`fractions.Fraction` are backend-neutral and promote to
either side; combining a :class:`QI` with a ``float``/``complex`` raises
:class:`~yrk.errors.BackendMismatchError`.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import BackendMismatchError, SchemaError

EXACT = "exact"
FLOAT = "float"

_MPQ = type(mpq(0))


def default_backend() -> str:
    backend = os.environ.get("YRK_BACKEND", EXACT).strip().lower()
    if backend not in (EXACT, FLOAT):
        raise SchemaError(f"YRK_BACKEND must be 'exact' or 'float', got {backend!r}")
    return backend


def _q(x) -> _MPQ:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise BackendMismatchError(f"cannot use {type(x).__name__} as an exact rational")


def _mk(re_, im_) -> "QI":
    obj = object.__new__(QI)
    obj.re = re_
    obj.im = im_
    return obj


class QI:
    """Exact element ``re + im*i`` of the Gaussian rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re_=0, im_=0):
        if isinstance(re_, QI):
            self.re, self.im = re_.re, re_.im
            if im_:
                raise TypeError("QI(QI, im) is ambiguous")
            return
        self.re = _q(re_)
        self.im = _q(im_)

    # -- coercion -------------------------------------------------------
    @staticmethod
    def coerce(x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, (int, _MPQ, Fraction)):
            return _mk(mpq(x), mpq(0))
        if isinstance(x, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        raise TypeError(f"cannot coerce {type(x).__name__} to QI")

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, QI):
            return _mk(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, _MPQ, Fraction)):
            return _mk(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QI):
            return _mk(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, _MPQ, Fraction)):
            return _mk(self.re - other, self.im)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, _MPQ, Fraction)):
            return _mk(other - self.re, -self.im)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QI):
            if not self.im and not other.im:
                return _mk(self.re * other.re, self.im)
            return _mk(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)
        if isinstance(other, (int, _MPQ, Fraction)):
            return _mk(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "QI":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("QI division by zero")
            return _mk(1 / self.re, self.im)
        n = self.re * self.re + self.im * self.im
        return _mk(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, QI):
            return self * other.inverse()
        if isinstance(other, (int, _MPQ, Fraction)):
            if not other:
                raise ZeroDivisionError("QI division by zero")
            return _mk(self.re / other, self.im / other)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError("mixing exact and float scalars")
        return NotImplemented

    def __rtruediv__(self, other):
        return QI.coerce(other) * self.inverse()

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QI":
        return _mk(self.re, -self.im)

    def __abs__(self) -> float:
        return abs(complex(self))

    # -- comparisons ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _MPQ, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    # -- conversions ----------------------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"QI({format_exact(self)!r})"

    def __str__(self):
        return format_exact(self)


ZERO = _mk(mpq(0), mpq(0))
ONE = _mk(mpq(1), mpq(0))
I = _mk(mpq(0), mpq(1))


def is_exact(x) -> bool:
    return isinstance(x, (QI, int, _MPQ, Fraction))


def backend_of(x) -> str | None:
    """``'exact'``, ``'float'`` or ``None`` for backend-neutral integers."""
    if isinstance(x, QI):
        return EXACT
    if isinstance(x, (float, complex)):
        return FLOAT
    if isinstance(x, (_MPQ, Fraction)):
        return EXACT
    return None


def as_exact(x) -> QI:
    return QI.coerce(x)


def to_complex(x) -> complex:
    return complex(x)


def _fmt_q(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_exact(z: QI) -> str:
    if not z.im:
        return _fmt_q(z.re)
    im = _fmt_q(abs(z.im))
    sign = "-" if z.im < 0 else "+"
    im_part = "i" if im == "1" else f"{im}*i"
    if not z.re:
        return ("-" if z.im < 0 else "") + im_part
    return f"{_fmt_q(z.re)}{sign}{im_part}"


_RAT = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*(?P<re>{_RAT})?\s*(?:(?P<sign>[+-])\s*(?P<im>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)?\s*\*?\s*[ij])?\s*$"
)
_PURE_IM_RE = re.compile(rf"^\s*(?P<im>{_RAT})?\s*\*?\s*[ij]\s*$")


def _parse_rational(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(Fraction(num), Fraction(den))
    return Fraction(text)


def parse_scalar(text, backend: str | None = None):
    """Parse ``'re'``, ``'re+imj'``, ``'p/q'`` or ``'-2+i'`` into a scalar.

    Decimal literals are read exactly (``'1.3'`` is 13/10) under the exact
    backend and as doubles under the float backend.
    """
    backend = backend or default_backend()
    if isinstance(text, (int, Fraction, _MPQ, QI)):
        return QI.coerce(text) if backend == EXACT else complex(text)
    if isinstance(text, (float, complex)):
        if backend == EXACT:
            z = complex(text)
            return QI(Fraction(repr(z.real)), Fraction(repr(z.imag)))
        return complex(text)
    if not isinstance(text, str):
        raise SchemaError(f"cannot parse scalar from {text!r}")
    s = text.strip().replace(" ", "")
    re_part = Fraction(0)
    im_part = Fraction(0)
    m = _PURE_IM_RE.match(s)
    if m and not re.match(r"^[+-]?\d.*[+-]", s):
        im_text = m.group("im")
        if im_text in (None, "+", ""):
            im_part = Fraction(1)
        elif im_text == "-":
            im_part = Fraction(-1)
        else:
            im_part = _parse_rational(im_text)
    else:
        m = _COMPLEX_RE.match(s)
        if not m or (m.group("re") is None and m.group("sign") is None):
            raise SchemaError(f"cannot parse scalar from {text!r}")
        if m.group("re") is not None:
            re_part = _parse_rational(m.group("re"))
        if m.group("sign") is not None:
            im_part = _parse_rational(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("sign") == "-":
                im_part = -im_part
    if backend == EXACT:
        return QI(re_part, im_part)
    return complex(float(re_part), float(im_part))


def rationalize(x: float, max_den: int) -> Fraction:
    return Fraction(x).limit_denominator(max_den)


def rationalize_complex(z: complex, max_den: int) -> QI:
    return QI(rationalize(z.real, max_den), rationalize(z.imag, max_den))
