"""Truncated power series in ``s^-1`` with matrix coefficients."""

from __future__ import annotations

from math import comb

import numpy as np

from . import linalg
from .scalars import EXACT, QI


def _is_exact(c: np.ndarray) -> bool:
    return c.dtype == object


class PowerSeries:
    """``sum_{k=0}^{N} c_k s^{-k} + O(s^{-N-1})``.

    Coefficients are 2-d arrays of a common shape (use 1x1 for scalars).
    Arithmetic truncates to the smaller order of the operands.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: list[np.ndarray]):
        if not coeffs:
            raise ValueError("a power series needs at least one coefficient")
        self.coeffs = [np.asarray(c) if not isinstance(c, np.ndarray) else c for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def shape(self):
        return self.coeffs[0].shape

    @property
    def backend(self) -> str:
        return linalg.backend_of_array(self.coeffs[0])

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, n: int, order: int, backend: str = EXACT) -> "PowerSeries":
        return cls([linalg.eye(n, backend)] + [linalg.zeros((n, n), backend) for _ in range(order)])

    @classmethod
    def zero(cls, shape, order: int, backend: str = EXACT) -> "PowerSeries":
        return cls([linalg.zeros(shape, backend) for _ in range(order + 1)])

    @classmethod
    def scalar(cls, values: list, backend: str = EXACT) -> "PowerSeries":
        out = []
        for v in values:
            c = linalg.zeros((1, 1), backend)
            c[0, 0] = QI.coerce(v) if backend == EXACT else complex(v)
            out.append(c)
        return cls(out)

    def coeff(self, k: int) -> np.ndarray:
        if k <= self.order:
            return self.coeffs[k]
        return linalg.zeros(self.shape, self.backend)

    def truncate(self, order: int) -> "PowerSeries":
        order = min(order, self.order)
        return PowerSeries(self.coeffs[: order + 1])

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] - other.coeffs[k] for k in range(n + 1)])

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs])

    def scale(self, factor) -> "PowerSeries":
        return PowerSeries([c * factor for c in self.coeffs])

    def __matmul__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = linalg.zeros((self.shape[0], other.shape[1]), self.backend)
            for j in range(k + 1):
                a, b = self.coeffs[j], other.coeffs[k - j]
                if linalg.is_zero(a) or linalg.is_zero(b):
                    continue
                acc = acc + linalg.matmul(a, b)
            out.append(acc)
        return PowerSeries(out)

    def mat_left(self, m: np.ndarray) -> "PowerSeries":
        return PowerSeries([linalg.matmul(m, c) for c in self.coeffs])

    def mat_right(self, m: np.ndarray) -> "PowerSeries":
        return PowerSeries([linalg.matmul(c, m) for c in self.coeffs])

    def inverse(self) -> "PowerSeries":
        """Inverse of a series whose constant coefficient is invertible."""
        c0inv = linalg.inv(self.coeffs[0])
        out = [c0inv]
        for k in range(1, self.order + 1):
            acc = linalg.zeros(self.shape, self.backend)
            for j in range(1, k + 1):
                acc = acc + linalg.matmul(self.coeffs[j], out[k - j])
            out.append(-linalg.matmul(c0inv, acc))
        return PowerSeries(out)

    def exp(self) -> "PowerSeries":
        """``exp`` of a series with vanishing constant term."""
        if not linalg.is_zero(self.coeffs[0], tol=0.0):
            raise ValueError("exp needs a series with zero constant term")
        n = self.shape[0]
        result = PowerSeries.identity(n, self.order, self.backend)
        term = PowerSeries.identity(n, self.order, self.backend)
        for k in range(1, self.order + 1):
            term = (term @ self).scale(QI(1, 0) / k if self.backend == EXACT else 1.0 / k)
            result = result + term
        return result

    def log(self) -> "PowerSeries":
        """``log`` of a series whose constant term is the identity."""
        n = self.shape[0]
        ident = linalg.eye(n, self.backend)
        if not linalg.is_zero(self.coeffs[0] - ident, tol=1e-14):
            raise ValueError("log needs a series with identity constant term")
        x = PowerSeries([linalg.zeros(self.shape, self.backend)] + self.coeffs[1:])
        result = PowerSeries.zero(self.shape, self.order, self.backend)
        power = PowerSeries.identity(n, self.order, self.backend)
        for k in range(1, self.order + 1):
            power = power @ x
            coef = (QI((-1) ** (k + 1)) / k) if self.backend == EXACT else ((-1) ** (k + 1)) / k
            result = result + power.scale(coef)
        return result

    # -- operations in the variable s --------------------------------------
    def shift(self, a) -> "PowerSeries":
        """Series of ``f(s + a)``: ``s^-p`` becomes ``sum_j C(-p, j) a^j s^{-p-j}``."""
        out = [linalg.zeros(self.shape, self.backend) for _ in range(self.order + 1)]
        out[0] = out[0] + self.coeffs[0]
        for p in range(1, self.order + 1):
            c = self.coeffs[p]
            if linalg.is_zero(c):
                continue
            apow = QI(1) if self.backend == EXACT else 1.0
            for j in range(0, self.order - p + 1):
                # C(-p, j) = (-1)^j C(p+j-1, j)
                out[p + j] = out[p + j] + c * (apow * ((-1) ** j * comb(p + j - 1, j)))
                apow = apow * a
        return PowerSeries(out)

    def derivative(self) -> "PowerSeries":
        """``d/ds``; the result carries the same truncation order."""
        out = [linalg.zeros(self.shape, self.backend) for _ in range(self.order + 1)]
        for p in range(1, self.order):
            out[p + 1] = self.coeffs[p] * (-p)
        return PowerSeries(out)

    def __call__(self, s) -> np.ndarray:
        """Partial sum at a numeric point."""
        w = 1 / complex(s)
        acc = np.zeros(self.shape, dtype=complex)
        wp = 1.0
        for c in self.coeffs:
            acc = acc + linalg.to_complex(c) * wp
            wp *= w
        return acc

    def partial_sum(self, s, k: int) -> np.ndarray:
        return self.truncate(k)(s)

    def conj_by(self, P: np.ndarray) -> "PowerSeries":
        return PowerSeries([linalg.matmul(linalg.matmul(P, c), P.T) for c in self.coeffs])

    def negate_variable(self) -> "PowerSeries":
        """Series of ``f(-s)``."""
        return PowerSeries([c * ((-1) ** k) for k, c in enumerate(self.coeffs)])

    def equals(self, other: "PowerSeries", tol: float = 0.0) -> bool:
        n = min(self.order, other.order)
        for k in range(n + 1):
            d = self.coeffs[k] - other.coeffs[k]
            if _is_exact(d):
                if not linalg.is_zero(d):
                    return False
            elif linalg.max_abs(d) > tol:
                return False
        return True

    def max_residual(self, other: "PowerSeries") -> float:
        n = min(self.order, other.order)
        return max(linalg.max_abs(self.coeffs[k] - other.coeffs[k]) for k in range(n + 1))

    def __repr__(self):
        return f"PowerSeries(order={self.order}, shape={self.shape}, backend={self.backend!r})"

