"""The meromorphic R-matrices ``R^{↑/↓}(s) = R⁺(s) R^{0,↑/↓}(s) R⁻(s)`` and their checks."""

from __future__ import annotations

import random
from functools import cached_property

import numpy as np

from . import linalg
from .cartan import omega_h, root_vectors_in
from .errors import PoleCollisionError
from .report import Report, residual_norm
from .repn import (Representation, _as_scalar, _check_compatible, realization, root_vector_tensor,
                   standard_tensor)
from .rminus import rminus_recursive, rplus_from_rminus
from .rzero import abelian_A, rzero_formal, rzero_updown
from .scalars import EXACT
from .series import PowerSeries


class MeromorphicRMatrix:
    """``R^ε_{V1,V2}(s)``; the rational factors are exact, the abelian one is numeric."""

    def __init__(self, V1: Representation, V2: Representation, direction: str = "up",
                 tol: float = 1e-12, rminus=None):
        _check_compatible(V1, V2)
        if direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
        self.V1, self.V2 = V1, V2
        self.direction = direction
        self.tol = tol
        self.minus = rminus if rminus is not None else rminus_recursive(V1, V2)
        self.plus = rplus_from_rminus(rminus_recursive(V2, V1), V1.dim, V2.dim)
        self.abelian = abelian_A(V1, V2)

    @property
    def dim(self) -> int:
        return self.V1.dim * self.V2.dim

    @cached_property
    def _minus_c(self):
        return self.minus.to_complex() if self.minus.backend == EXACT else self.minus

    @cached_property
    def _plus_c(self):
        return self.plus.to_complex() if self.plus.backend == EXACT else self.plus

    def zero_part(self, s) -> np.ndarray:
        return rzero_updown(self.abelian, s, self.direction, self.tol).matrix

    def __call__(self, s) -> np.ndarray:
        s = complex(s)
        return self._plus_c(s) @ self.zero_part(s) @ self._minus_c(s)

    def series(self, order: int) -> PowerSeries:
        """Formal ``R(s)`` through ``s^-order`` (exact for exact input)."""
        plus = PowerSeries(self.plus.series_at_infinity(order))
        minus = PowerSeries(self.minus.series_at_infinity(order))
        return plus @ rzero_formal(self.V1, self.V2, order) @ minus


def casimir(V1: Representation, V2: Representation) -> np.ndarray:
    """``Ω_g = sum_β (x^-_β ⊗ x^+_β + x^+_β ⊗ x^-_β) + Ω_h`` on ``V1 ⊗ V2``."""
    z = realization(V1.cartan)
    rv1 = root_vectors_in(z.roots, V1.xp0, V1.xm0)
    rv2 = root_vectors_in(z.roots, V2.xp0, V2.xm0)
    out = root_vector_tensor(V1, V2) + omega_h(V1.cartan, V1.xi0, V2.xi0)
    for (_, _, xp1), (_, xm2, _) in zip(rv1, rv2):
        out = out + linalg.kron(xp1, xm2)
    return out


def check_one_jet(V1: Representation, V2: Representation, order: int = 2) -> Report:
    rep = Report("rfull_one_jet")
    R = MeromorphicRMatrix(V1, V2)
    ser = R.series(order)
    exact = V1.backend == EXACT
    n = R.dim
    res0 = residual_norm(ser.coeffs[0] - linalg.eye(n, V1.backend))
    res1 = residual_norm(ser.coeffs[1] - casimir(V1, V2) * V1.hbar)
    rep.add("full_one_jet", "R(s) = 1 + ħ Ω_g / s + O(s⁻²)", max(res0, res1), 0.0 if exact else 1e-10)
    return rep.finish()


def _samples(count: int, seed: int, radius: float = 10.0) -> list[tuple[complex, complex]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s1 = complex(round(rng.uniform(-radius, radius), 3), round(rng.uniform(-radius / 2, radius / 2), 3))
        s2 = complex(round(rng.uniform(-radius, radius), 3), round(rng.uniform(-radius / 2, radius / 2), 3))
        if min(abs(s1), abs(s2), abs(s1 + s2)) < 1.0:
            continue
        out.append((s1, s2))
    return out


def _run_samples(fn, samples, seed, count):
    """Evaluate ``fn(s1, s2)`` on given or seeded samples, resampling pole hits."""
    used, worst, skipped = [], 0.0, 0
    pool = list(samples) if samples is not None else None
    k = 0
    while len(used) < (len(pool) if pool is not None else count):
        if pool is not None:
            s1, s2 = pool[len(used)]
        else:
            s1, s2 = _samples(1, seed * 1000 + k)[0]
            k += 1
        try:
            worst = max(worst, fn(s1, s2))
        except (PoleCollisionError, ZeroDivisionError, np.linalg.LinAlgError):
            if pool is not None:
                raise
            skipped += 1
            continue
        used.append((s1, s2))
    return worst, used, skipped


def check_qybe(V1: Representation, V2: Representation, V3: Representation, direction: str = "up",
               samples=None, count: int = 5, seed: int = 0, tol: float = 1e-7,
               rminus12=None) -> Report:
    """``R12(s1) R13(s1+s2) R23(s2) = R23(s2) R13(s1+s2) R12(s1)``.

    ``rminus12`` replaces the computed ``R⁻_{V1,V2}`` (used to test stored factors).
    """
    rep = Report("qybe", seed=seed)
    dims = (V1.dim, V2.dim, V3.dim)
    R12 = MeromorphicRMatrix(V1, V2, direction, rminus=rminus12)
    R13 = MeromorphicRMatrix(V1, V3, direction)
    R23 = MeromorphicRMatrix(V2, V3, direction)

    def one(s1, s2):
        a = linalg.embed(R12(s1), (0, 1), dims)
        b = linalg.embed(R13(s1 + s2), (0, 2), dims)
        c = linalg.embed(R23(s2), (1, 2), dims)
        return linalg.max_abs(a @ b @ c - c @ b @ a)

    worst, used, skipped = _run_samples(one, samples, seed, count)
    rep.add("qybe", "R12(s1) R13(s1+s2) R23(s2) = R23(s2) R13(s1+s2) R12(s1)", worst, tol, used,
            f"resampled {skipped} pole hits" if skipped else "")
    return rep.finish()


def check_qybe_abelian(V1, V2, V3, direction="up", samples=None, count=3, seed=0, tol=1e-8) -> Report:
    """The Yang-Baxter equation for ``R^{0,ε}`` alone, all factors commuting."""
    rep = Report("qybe_abelian", seed=seed)
    dims = (V1.dim, V2.dim, V3.dim)
    A12, A13, A23 = abelian_A(V1, V2), abelian_A(V1, V3), abelian_A(V2, V3)

    def one(s1, s2):
        a = linalg.embed(rzero_updown(A12, s1, direction).matrix, (0, 1), dims)
        b = linalg.embed(rzero_updown(A13, s1 + s2, direction).matrix, (0, 2), dims)
        c = linalg.embed(rzero_updown(A23, s2, direction).matrix, (1, 2), dims)
        return linalg.max_abs(a @ b @ c - c @ b @ a)

    worst, used, _ = _run_samples(one, samples, seed, count)
    rep.add("qybe_abelian", "Yang-Baxter equation for the abelian factor", worst, tol, used)
    return rep.finish()


def check_full_cabling_unitarity(V1: Representation, V2: Representation, V3: Representation,
                                 direction: str = "up", samples=None, count: int = 3, seed: int = 0,
                                 tol: float = 1e-8) -> Report:
    """Cabling with standard tensor products, intertwining, and unitarity."""
    rep = Report("rfull_cabling_unitarity", seed=seed)
    dims = (V1.dim, V2.dim, V3.dim)
    backend = V1.backend
    R12 = MeromorphicRMatrix(V1, V2, direction)
    R13 = MeromorphicRMatrix(V1, V3, direction)
    R23 = MeromorphicRMatrix(V2, V3, direction)
    other = "down" if direction == "up" else "up"
    R21_other = MeromorphicRMatrix(V2, V1, other)

    def exact_pt(s):
        # standard tensor products need exact shifts on the exact backend
        if backend != EXACT:
            return s
        from .scalars import rationalize_complex
        return rationalize_complex(complex(s), 1000)

    def left(s1, s2):
        s1, s2 = exact_pt(s1), exact_pt(s2)
        lhs = MeromorphicRMatrix(standard_tensor(V1, V2, s1), V3, direction)(complex(s2))
        rhs = linalg.embed(R13(complex(s1 + s2)), (0, 2), dims) @ linalg.embed(R23(complex(s2)), (1, 2), dims)
        return linalg.max_abs(lhs - rhs)

    def right(s1, s2):
        s1, s2 = exact_pt(s1), exact_pt(s2)
        lhs = MeromorphicRMatrix(V1, standard_tensor(V2, V3, s2), direction)(complex(s1 + s2))
        rhs = linalg.embed(R13(complex(s1 + s2)), (0, 2), dims) @ linalg.embed(R12(complex(s1)), (0, 1), dims)
        return linalg.max_abs(lhs - rhs)

    P = linalg.to_complex(linalg.flip_matrix(V1.dim, V2.dim))

    def intertwine(s1, _s2):
        s = exact_pt(s1)
        src = standard_tensor(V1, V2, s)
        dst = standard_tensor(V2, V1.shift(s), 0)
        M = P @ R12(complex(s))
        worst = 0.0
        for key, mats in src.generators().items():
            for a, b in zip(mats, dst.generators()[key]):
                worst = max(worst, linalg.max_abs(M @ linalg.to_complex(a) - linalg.to_complex(b) @ M))
        return worst / max(1.0, linalg.max_abs(M))

    def unitarity(s1, _s2):
        lhs = P @ R12(-complex(s1)) @ P.T if direction == "up" else None
        if lhs is None:
            # flip R↑_{21}(-s) flip = R↓_{12}(s)^-1
            Q = P.T
            lhs = np.linalg.inv(Q @ R21_other(-complex(s1)) @ Q.T)
            return linalg.max_abs(lhs - R12(complex(s1)))
        return linalg.max_abs(lhs - np.linalg.inv(R21_other(complex(s1))))

    for cid, anchor, fn in (
        ("cabling_left", "R_{V1⊗V2,V3}(s2) = R13(s1+s2) R23(s2)", left),
        ("cabling_right", "R_{V1,V2⊗V3}(s1+s2) = R13(s1+s2) R12(s1)", right),
        ("intertwiner", "flip R(s) is a module map V1(s)⊗V2 → V2⊗V1(s)", intertwine),
        ("unitarity", "flip R↑_{12}(-s) flip = R↓_{21}(s)^{-1}", unitarity),
    ):
        worst, used, skipped = _run_samples(fn, samples, seed, count)
        rep.add(cid, anchor, worst, tol, used, f"resampled {skipped} pole hits" if skipped else "")
    return rep.finish()


def check_shift_covariance(V1: Representation, V2: Representation, a, b, points,
                           direction: str = "up", tol: float = 1e-8) -> Report:
    rep = Report("rfull_shift")
    R = MeromorphicRMatrix(V1, V2, direction)
    Rab = MeromorphicRMatrix(V1.shift(a), V2.shift(b), direction)
    d = complex(_as_scalar(a, V1.backend) - _as_scalar(b, V1.backend))
    worst = max(linalg.max_abs(Rab(s) - R(complex(s) + d)) for s in points)
    rep.add("shift_covariance", "R_{V1(a),V2(b)}(s) = R(s + a - b)", worst, tol, list(points))
    return rep.finish()


def asymptotic_report(V1: Representation, V2: Representation, direction: str = "up", order: int = 4,
                      points=(50,)) -> Report:
    """Errors of the partial sums of the formal series along a ray.

    ``R^{0,↑}`` is expanded on the ray ``s = tħ`` and ``R^{0,↓}`` on ``s = -tħ``,
    the halfplanes where the canonical products are asymptotic to the series.
    """
    rep = Report("rfull_asymptotics")
    R = MeromorphicRMatrix(V1, V2, direction)
    ser = R.series(order)
    h = complex(V1.hbar)
    for t in points:
        s = t * h if direction == "up" else -t * h
        val = R(s)
        errs = [linalg.max_abs(val - ser.partial_sum(s, k)) for k in range(order + 1)]
        mono = all(errs[k + 1] < errs[k] for k in range(order))
        fit = errs[order] * abs(s) ** (order + 1)
        rep.add(f"asymptotic_s{t}", "R^ε(s) ~ R(s) as s → ∞", errs[order], 1e-6, [s],
                detail=f"errors={['%.3e' % e for e in errs]} C={fit:.3e}", passed=mono and errs[order] <= 1e-6)
    return rep.finish()
