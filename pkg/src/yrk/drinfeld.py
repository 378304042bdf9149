"""The deformed Drinfeld tensor product, in residue form and as a series in ``s^-1``."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from . import linalg
from .errors import PoleCollisionError
from .poly import exact_roots
from .ratfun import RatFun
from .ratmat import RatMat, kron as rkron
from .report import Report, residual_norm
from .repn import Representation, _as_scalar, _check_compatible, _dedupe
from .scalars import EXACT, QI
from .series import PowerSeries


def pole_data(f: RatMat) -> list[tuple[object, list[np.ndarray]]]:
    """Principal parts of a matrix current vanishing at infinity.

    Returns ``[(p, [C_1, ..., C_m])]`` with ``f(v) = sum C_k / (v - p)^k``.
    """
    den = f.common_den()
    if den.degree <= 0:
        return []
    out = []
    for p, m in exact_roots(den, allow_numeric=f.backend != EXACT):
        coeffs = f.laurent_at(p, m, -1)
        out.append((p, [coeffs[m - k] for k in range(1, m + 1)]))
    return out


def _derivs(f: RatMat, kmax: int) -> list[RatMat]:
    """``f^{(k)}/k!`` for ``k < kmax``."""
    out = [f]
    for k in range(1, kmax):
        out.append(out[-1].derivative())
    return [d * RatFun.const(QI(1, 0) / factorial(k) if f.backend == EXACT else 1 / factorial(k), f.backend)
            for k, d in enumerate(out)]


@dataclass
class DrinfeldModule:
    """Generators of ``V ⊗ᴰ_s W`` as rational functions of ``s``.

    ``ξ_{i,0}`` is constant, ``t_{i,1}(s) = t_{i,1}(0) + s ξ_{i,0} ⊗ 1``.
    """

    V: Representation
    W: Representation
    xi0: list[np.ndarray]
    t1_base: list[np.ndarray]
    t1_slope: list[np.ndarray]
    xp0: list[RatMat]
    xm0: list[RatMat]

    @property
    def dim(self) -> int:
        return self.V.dim * self.W.dim

    def t1(self, i: int) -> RatMat:
        s = RatFun.x(self.V.backend)
        return RatMat.const(self.t1_base[i]) + RatMat.const(self.t1_slope[i]) * s

    def pole_candidates(self) -> list:
        """``σ(W) - σ(V)``, which contains every pole in ``s``."""
        return _dedupe([q - p for p in self.V.pole_set() for q in self.W.pole_set()])

    def at(self, s) -> Representation:
        return drinfeld_tensor(self.V, self.W, s)


def _xp_terms(V: Representation, W: Representation, i: int):
    """``[(p, k, ξ_V^{(k-1)}/(k-1)!, C_{p,k})]`` for the ``x^+`` correction."""
    data = pole_data(W.currents(i).xp)
    kmax = max((len(c) for _, c in data), default=0)
    derivs = _derivs(V.currents(i).xi, kmax) if kmax else []
    return [(p, k, derivs[k - 1], C) for p, cs in data for k, C in enumerate(cs, start=1)]


def _xm_terms(V: Representation, W: Representation, i: int):
    data = pole_data(V.currents(i).xm)
    kmax = max((len(c) for _, c in data), default=0)
    derivs = _derivs(W.currents(i).xi, kmax) if kmax else []
    return [(p, k, derivs[k - 1], D) for p, ds in data for k, D in enumerate(ds, start=1)]


def _common(V: Representation, W: Representation):
    _check_compatible(V, W)
    Iv, Iw = V.identity(), W.identity()
    xi0 = [linalg.kron(a, Iw) + linalg.kron(Iv, b) for a, b in zip(V.xi0, W.xi0)]
    base = [linalg.kron(a, Iw) + linalg.kron(Iv, b) for a, b in zip(V.t1, W.t1)]
    slope = [linalg.kron(a, Iw) for a in V.xi0]
    return xi0, base, slope


def drinfeld_tensor(V: Representation, W: Representation, s) -> Representation:
    """``V ⊗ᴰ_s W`` at a fixed value of ``s``."""
    s = _as_scalar(s, V.backend)
    sv = [p + s for p in V.pole_set()]
    for p in sv:
        for q in W.pole_set():
            if p == q:
                raise PoleCollisionError(f"σ(V)+s and σ(W) meet at {p}")
    xi0, base, slope = _common(V, W)
    inv_h = V.hbar ** -1 if V.backend == EXACT else 1 / V.hbar
    Iv, Iw = V.identity(), W.identity()
    xp0, xm0, t1 = [], [], []
    for i in range(V.rank):
        acc = linalg.kron(V.xp0[i], Iw)
        for p, k, dxi, C in _xp_terms(V, W, i):
            acc = acc + linalg.kron(dxi(p - s), C) * inv_h
        xp0.append(acc)
        acc = linalg.kron(Iv, W.xm0[i])
        for p, k, dxi, D in _xm_terms(V, W, i):
            acc = acc + linalg.kron(D, dxi(p + s)) * inv_h
        xm0.append(acc)
        t1.append(base[i] + slope[i] * s)
    poles = _dedupe(sv + list(W.pole_set()))
    prov = {"kind": "drinfeld_tensor", "s": s, "left": V.provenance, "right": W.provenance}
    return Representation(V.cartan, V.hbar, xi0, xp0, xm0, t1, poles, prov)


def drinfeld_tensor_symbolic(V: Representation, W: Representation) -> DrinfeldModule:
    """``V ⊗ᴰ_s W`` with ``x^±_{i,0}`` as rational functions of ``s``."""
    xi0, base, slope = _common(V, W)
    inv_h = V.hbar ** -1 if V.backend == EXACT else 1 / V.hbar
    Iv, Iw = V.identity(), W.identity()
    xp0, xm0 = [], []
    for i in range(V.rank):
        acc = RatMat.const(linalg.kron(V.xp0[i], Iw))
        for p, k, dxi, C in _xp_terms(V, W, i):
            acc = acc + rkron(dxi.compose_linear(-1, p), C) * inv_h
        xp0.append(acc)
        acc = RatMat.const(linalg.kron(Iv, W.xm0[i]))
        for p, k, dxi, D in _xm_terms(V, W, i):
            acc = acc + rkron(D, dxi.compose_linear(1, p)) * inv_h
        xm0.append(acc)
    return DrinfeldModule(V, W, xi0, base, slope, xp0, xm0)


def drinfeld_tensor_series(V: Representation, W: Representation, order: int) -> dict:
    """Series in ``s^-1`` of ``x^±_{i,0}`` on ``V ⊗ᴰ_s W`` through ``s^-order``.

    Returns ``{"xp": [PowerSeries per node], "xm": [...]}``.
    """
    _check_compatible(V, W)
    h = V.hbar
    Iv, Iw = V.identity(), W.identity()
    out = {"xp": [], "xm": []}
    for i in range(V.rank):
        xi_v = [V.xi_mode(i, r) for r in range(order)]
        xi_w = [W.xi_mode(i, r) for r in range(order)]
        xp_w = [W.x_mode(i, r, +1) for r in range(order)]
        xm_v = [V.x_mode(i, r, -1) for r in range(order)]
        cp = [linalg.kron(V.xp0[i], Iw) + linalg.kron(Iv, W.xp0[i])]
        cm = [linalg.kron(V.xm0[i], Iw) + linalg.kron(Iv, W.xm0[i])]
        for N in range(order):
            accp = linalg.zeros(cp[0].shape, V.backend)
            accm = linalg.zeros(cp[0].shape, V.backend)
            for n in range(N + 1):
                c = h * comb(N, n)
                # ξ_V(v - s) expands in powers of -1/s, ξ_W(v + s) in powers of +1/s
                accp = accp + linalg.kron(xi_v[n], xp_w[N - n]) * (c * (-1) ** (n + 1))
                accm = accm + linalg.kron(xm_v[n], xi_w[N - n]) * (c * (-1) ** n)
            cp.append(accp)
            cm.append(accm)
        out["xp"].append(PowerSeries(cp))
        out["xm"].append(PowerSeries(cm))
    return out


def coassociativity_check(V1: Representation, V2: Representation, V3: Representation,
                          s1, s2) -> Report:
    """``(V1 ⊗ᴰ_{s1} V2) ⊗ᴰ_{s2} V3`` against ``V1 ⊗ᴰ_{s1+s2} (V2 ⊗ᴰ_{s2} V3)``."""
    rep = Report("drinfeld_coassociativity")
    left = drinfeld_tensor(drinfeld_tensor(V1, V2, s1), V3, s2)
    right = drinfeld_tensor(V1, drinfeld_tensor(V2, V3, s2), s1 + s2)
    worst = 0.0
    for key, mats in left.generators().items():
        for a, b in zip(mats, right.generators()[key]):
            worst = max(worst, residual_norm(a - b))
    rep.add("coassociativity", "identification of iterated Drinfeld tensor products",
            worst, 0.0 if V1.backend == EXACT else 1e-9, [s1, s2])
    return rep.finish()
