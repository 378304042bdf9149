"""Finite-dimensional representations of the Yangian and their currents.

A representation is stored through the matrices of the generating set
``ξ_{i,0}, x^±_{i,0}, t_{i,1}`` in a basis where every ``ξ_{i,0}`` is
diagonal.  Currents are rebuilt from these by the rationality formula.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .cartan import CartanData, ZeroModeRealization, root_vectors_in
from .errors import MathDomainError, PoleCollisionError, SchemaError
from .poly import Poly, exact_roots
from .ratfun import RatFun
from .ratmat import RatMat, kron as rkron
from .report import Report, residual_norm
from .scalars import EXACT, FLOAT, QI
from .series import PowerSeries


def _as_scalar(x, backend: str):
    if backend == EXACT:
        return QI.coerce(x)
    return complex(x)


@lru_cache(maxsize=None)
def realization(cd: CartanData) -> ZeroModeRealization:
    return ZeroModeRealization.build(cd)


class Currents:
    """``ξ_i(u)`` and ``x_i^±(u)`` for one node, with Krylov data for the modes."""

    def __init__(self, xi: RatMat, xp: RatMat, xm: RatMat, krylov_p: list, krylov_m: list):
        self.xi = xi
        self.xp = xp
        self.xm = xm
        self._kp = krylov_p
        self._km = krylov_m


class Representation:
    """A finite-dimensional module given by its generator matrices."""

    def __init__(self, cartan: CartanData, hbar, xi0, xp0, xm0, t1,
                 poles=None, provenance: dict | None = None):
        self.cartan = cartan
        mats = [*xi0, *xp0, *xm0, *t1]
        self.backend = linalg.backend_of_array(mats[0]) if mats else EXACT
        self.hbar = _as_scalar(hbar, self.backend)
        n = cartan.rank
        if not (len(xi0) == len(xp0) == len(xm0) == len(t1) == n):
            raise SchemaError("one matrix per node is required for each generator")
        dim = xi0[0].shape[0]
        for m in mats:
            if m.shape != (dim, dim):
                raise SchemaError("generator matrices must be square of a common size")
            if linalg.backend_of_array(m) != self.backend:
                raise SchemaError("generator matrices mix exact and float entries")
        self.xi0 = list(xi0)
        self.xp0 = list(xp0)
        self.xm0 = list(xm0)
        self.t1 = list(t1)
        self.dim = dim
        self.declared_poles = None if poles is None else [_as_scalar(p, self.backend) for p in poles]
        self.provenance = provenance or {}
        self._currents: dict[int, Currents] = {}
        for m in self.xi0:
            if not _is_diagonal(m):
                raise SchemaError("ξ_{i,0} must be diagonal; use from_matrices to diagonalise")

    # -- basic data -----------------------------------------------------
    @property
    def rank(self) -> int:
        return self.cartan.rank

    def zero(self) -> np.ndarray:
        return linalg.zeros((self.dim, self.dim), self.backend)

    def identity(self) -> np.ndarray:
        return linalg.eye(self.dim, self.backend)

    def weight(self, k: int) -> tuple:
        """Eigenvalues of ``ξ_{i,0}`` on the ``k``-th basis vector."""
        return tuple(m[k, k] for m in self.xi0)

    def weights(self) -> list[tuple]:
        return [self.weight(k) for k in range(self.dim)]

    def weight_spaces(self) -> dict[tuple, list[int]]:
        out: dict[tuple, list[int]] = {}
        for k in range(self.dim):
            out.setdefault(self.weight(k), []).append(k)
        return out

    def weight_projectors(self) -> list[tuple[tuple, np.ndarray]]:
        out = []
        for w, idx in self.weight_spaces().items():
            P = self.zero()
            for k in idx:
                P[k, k] = QI(1) if self.backend == EXACT else 1.0
            out.append((w, P))
        return out

    def same_algebra(self, other: "Representation") -> bool:
        return self.cartan == other.cartan and self.hbar == other.hbar

    def generators(self) -> dict[str, list[np.ndarray]]:
        return {"xi0": self.xi0, "xp0": self.xp0, "xm0": self.xm0, "t1": self.t1}

    def equals(self, other: "Representation", tol: float = 0.0) -> bool:
        if self.dim != other.dim or not self.same_algebra(other):
            return False
        for key, mats in self.generators().items():
            for a, b in zip(mats, other.generators()[key]):
                d = a - b
                if d.dtype == object and b.dtype == object:
                    if not linalg.is_zero(d):
                        return False
                elif linalg.max_abs(d) > tol:
                    return False
        return True

    # -- shifts ---------------------------------------------------------
    def shift(self, a) -> "Representation":
        """Pull back along ``τ_a``: ``t_{i,1} -> t_{i,1} + a ξ_{i,0}``."""
        a = _as_scalar(a, self.backend)
        poles = None if self.declared_poles is None else [p + a for p in self.declared_poles]
        prov = {"kind": "shift", "a": a, "of": self.provenance}
        return Representation(self.cartan, self.hbar, self.xi0, self.xp0, self.xm0,
                              [t + x * a for t, x in zip(self.t1, self.xi0)], poles, prov)

    def to_float(self) -> "Representation":
        """Copy on the float backend."""
        if self.backend == FLOAT:
            return self
        c = linalg.to_complex
        poles = None if self.declared_poles is None else [complex(p) for p in self.declared_poles]
        return Representation(self.cartan, complex(self.hbar), [c(m) for m in self.xi0],
                              [c(m) for m in self.xp0], [c(m) for m in self.xm0],
                              [c(m) for m in self.t1], poles, self.provenance)

    # -- currents -------------------------------------------------------
    def _shift_operator(self, i: int, sign: int):
        d = self.cartan.d[i]
        t = self.t1[i]
        factor = _as_scalar(Fraction(sign, 2 * d), self.backend)

        def apply(X):
            return linalg.commutator(t, X) * factor
        return apply

    def currents(self, i: int) -> Currents:
        if i not in self._currents:
            xp, kp = self._resolvent(i, +1)
            xm, km = self._resolvent(i, -1)
            xi = self._xi_from(xp, kp, i)
            self._currents[i] = Currents(xi, xp, xm, kp, km)
        return self._currents[i]

    def _resolvent(self, i: int, sign: int):
        """``ħ (u - M)^-1 x_0`` with ``M = ±ad(t_{i,1})/(2 d_i)`` via Krylov vectors."""
        x0 = self.xp0[i] if sign > 0 else self.xm0[i]
        apply = self._shift_operator(i, sign)
        krylov, mu = _krylov(apply, x0, self.backend)
        k = len(mu) - 1
        # numerator coefficient of u^e is sum_j mu_{e+1+j} K_j
        coeffs = []
        for e in range(max(k, 1)):
            acc = self.zero()
            for j in range(k - e):
                acc = acc + krylov[j] * mu[e + 1 + j]
            coeffs.append(acc * self.hbar)
        den = Poly(mu, self.backend)
        return RatMat.from_poly_coeffs(coeffs, den), (krylov, mu)

    def _xi_from(self, xp: RatMat, kp, i: int) -> RatMat:
        krylov, mu = kp
        k = len(mu) - 1
        xm0 = self.xm0[i]
        coeffs = [self.identity() * mu[e] for e in range(k + 1)]
        for e in range(k):
            acc = self.zero()
            for j in range(k - e):
                acc = acc + linalg.commutator(krylov[j], xm0) * mu[e + 1 + j]
            coeffs[e] = coeffs[e] + acc * self.hbar
        return RatMat.from_poly_coeffs(coeffs, Poly(mu, self.backend))

    def x_mode(self, i: int, r: int, sign: int) -> np.ndarray:
        """``x^±_{i,r} = M^r x^±_{i,0}``."""
        apply = self._shift_operator(i, sign)
        x = self.xp0[i] if sign > 0 else self.xm0[i]
        for _ in range(r):
            x = apply(x)
        return x

    def xi_mode(self, i: int, r: int) -> np.ndarray:
        """``ξ_{i,r} = [x^+_{i,r}, x^-_{i,0}]``."""
        return linalg.commutator(self.x_mode(i, r, +1), self.xm0[i])

    def xi_series(self, i: int, order: int) -> PowerSeries:
        """``ξ_i(u)`` as a series in ``u^-1`` through ``u^-order``."""
        coeffs = [self.identity()] + [self.xi_mode(i, r) * self.hbar for r in range(order)]
        return PowerSeries(coeffs)

    def t_modes(self, i: int, count: int) -> list[np.ndarray]:
        """``t_{i,0}, ..., t_{i,count-1}`` from ``t_i(u) = log ξ_i(u)``."""
        log = self.xi_series(i, count).log()
        inv_h = self.hbar ** -1 if self.backend == EXACT else 1 / self.hbar
        return [log.coeffs[r + 1] * inv_h for r in range(count)]

    # -- poles ------------------------------------------------------------
    def pole_set(self, use_declared: bool = True) -> list:
        """Poles of all currents; the declared superset is used when available."""
        if use_declared and self.declared_poles is not None:
            return _dedupe(self.declared_poles)
        return self.computed_poles()

    def computed_poles(self) -> list:
        out = []
        for i in range(self.rank):
            c = self.currents(i)
            for m in (c.xi, c.xp, c.xm):
                den = m.common_den()
                if den.degree > 0:
                    out.extend(p for p, _ in exact_roots(den, allow_numeric=True))
        return _dedupe(out)

    def __repr__(self):
        kind = self.provenance.get("kind", "custom")
        return f"Representation(dim={self.dim}, rank={self.rank}, kind={kind!r})"


def _dedupe(points: list) -> list:
    out = []
    for p in points:
        if not any(p == q for q in out):
            out.append(p)
    return out


def _is_diagonal(m: np.ndarray) -> bool:
    n = m.shape[0]
    off = [m[i, j] for i in range(n) for j in range(n) if i != j]
    if m.dtype == object:
        return not any(bool(x) for x in off)
    return all(abs(x) < 1e-12 for x in off)


def _flatten(X: np.ndarray) -> np.ndarray:
    return X.reshape(-1, 1)


def _krylov(apply, x0: np.ndarray, backend: str):
    """Krylov vectors ``x0, Mx0, ...`` and the monic minimal polynomial ``mu``
    (low to high) with ``mu(M) x0 = 0``."""
    one = QI(1) if backend == EXACT else 1.0
    if linalg.is_zero(x0, tol=1e-14):
        return [], [one]
    vecs = [x0]
    while True:
        nxt = apply(vecs[-1])
        K = np.concatenate([_flatten(v) for v in vecs], axis=1)
        b = _flatten(nxt)
        gamma = _dependence(K, b, backend)
        if gamma is not None:
            mu = [-g for g in gamma] + [one]
            return vecs, mu
        vecs.append(nxt)
        if len(vecs) > x0.size + 1:
            raise MathDomainError("Krylov iteration failed to terminate")


def _dependence(K: np.ndarray, b: np.ndarray, backend: str):
    """Coefficients ``γ`` with ``K γ = b`` or ``None`` if ``b`` is independent."""
    if backend == EXACT:
        aug = np.concatenate([K, b], axis=1)
        m, piv = linalg.rref(aug)
        n = K.shape[1]
        if n in piv:
            return None
        gamma = [QI(0)] * n
        for r, p in enumerate(piv):
            gamma[p] = m[r, n]
        return gamma
    sol, *_ = np.linalg.lstsq(K, b, rcond=None)
    res = np.max(np.abs(K @ sol - b), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    if res > 1e-9 * scale:
        return None
    return [complex(x) for x in sol[:, 0]]


# ---------------------------------------------------------------------------
# constructors


def _unit(n: int, i: int, j: int, backend: str = EXACT) -> np.ndarray:
    m = linalg.zeros((n, n), backend)
    m[i, j] = QI(1) if backend == EXACT else 1.0
    return m


def evaluation_rep_sl2(a=0, hbar=1, backend: str | None = None) -> Representation:
    """``ℂ²(a)``: currents ``ħ e/(u-a)`` on the vector representation of sl2."""
    backend = backend or (FLOAT if isinstance(a, (float, complex)) or isinstance(hbar, (float, complex)) else EXACT)
    cd = CartanData.of_type("A1")
    a = _as_scalar(a, backend)
    h = _as_scalar(hbar, backend)
    xi = _unit(2, 0, 0, backend) - _unit(2, 1, 1, backend)
    xp = _unit(2, 0, 1, backend)
    xm = _unit(2, 1, 0, backend)
    half = _as_scalar(Fraction(1, 2), backend)
    t1 = xi * a - linalg.eye(2, backend) * (h * half)
    return Representation(cd, h, [xi], [xp], [xm], [t1], poles=[a],
                          provenance={"kind": "sl2-eval", "a": a})


def vector_rep_sl3(a=0, hbar=1) -> Representation:
    """The three-dimensional evaluation module ``ℂ³(a)`` of ``Y(sl3)``."""
    cd = CartanData.of_type("A2")
    a = QI.coerce(a)
    h = QI.coerce(hbar)
    half = QI(Fraction(1, 2))
    xi, xp, xm, t1 = [], [], [], []
    for j in range(2):
        hj = _unit(3, j, j) - _unit(3, j + 1, j + 1)
        lam = a + h * half * j
        xi.append(hj)
        xp.append(_unit(3, j, j + 1))
        xm.append(_unit(3, j + 1, j))
        t1.append(hj * lam - (_unit(3, j, j) + _unit(3, j + 1, j + 1)) * (h * half))
    poles = [a, a + h * half]
    return Representation(cd, h, xi, xp, xm, t1, poles=poles,
                          provenance={"kind": "sl3-vector", "a": a})


def trivial_rep(cartan: CartanData | str = "A1", hbar=1, backend: str = EXACT) -> Representation:
    if isinstance(cartan, str):
        cartan = CartanData.of_type(cartan)
    z = linalg.zeros((1, 1), backend)
    n = cartan.rank
    return Representation(cartan, hbar, [z] * n, [z] * n, [z] * n, [z] * n, poles=[],
                          provenance={"kind": "trivial"})


def shift_rep(V: Representation, a) -> Representation:
    return V.shift(a)


def from_matrices(cartan: CartanData, hbar, xi0, xp0, xm0, t1, poles=None,
                  provenance: dict | None = None) -> Representation:
    """Accept raw generator matrices, passing to a basis where ``ξ_{i,0}`` is diagonal."""
    if all(_is_diagonal(m) for m in xi0):
        return Representation(cartan, hbar, xi0, xp0, xm0, t1, poles, provenance)
    backend = linalg.backend_of_array(xi0[0])
    n = xi0[0].shape[0]
    if backend == EXACT:
        generic = sum((m * (7 ** k + 1) for k, m in enumerate(xi0)), linalg.zeros((n, n)))
        cols = [linalg.column_basis(P) for _, P in linalg.eigen_projectors(generic)]
        S = np.concatenate(cols, axis=1)
        Sinv = linalg.inv(S)
    else:
        generic = sum(m * (0.7 + 1.3 * k) for k, m in enumerate(xi0))
        _, S = np.linalg.eig(generic)
        Sinv = np.linalg.inv(S)

    def conj(m):
        return linalg.matmul(linalg.matmul(Sinv, m), S)
    new = [[conj(m) for m in group] for group in (xi0, xp0, xm0, t1)]
    if backend == FLOAT:
        for m in new[0]:
            m[np.abs(m) < 1e-12] = 0
    if not all(_is_diagonal(m) for m in new[0]):
        raise MathDomainError("ξ_{i,0} are not simultaneously diagonalisable")
    return Representation(cartan, hbar, *new, poles=poles, provenance=provenance)


# ---------------------------------------------------------------------------
# tensor products


def _check_compatible(V: Representation, W: Representation) -> None:
    if V.cartan != W.cartan:
        raise SchemaError("tensor factors use different Cartan data")
    if V.hbar != W.hbar:
        raise SchemaError("tensor factors use different values of ħ")
    if V.backend != W.backend:
        raise SchemaError("tensor factors use different scalar backends")


def root_vector_tensor(V: Representation, W: Representation, weights=None) -> np.ndarray:
    """``sum_β w(β) x^-_β ⊗ x^+_β`` on ``V ⊗ W`` (``w = 1`` gives ``𝔯``)."""
    z = realization(V.cartan)
    rv = root_vectors_in(z.roots, V.xp0, V.xm0)
    rw = root_vectors_in(z.roots, W.xp0, W.xm0)
    out = linalg.zeros((V.dim * W.dim,) * 2, V.backend)
    for (beta, xm_v, _), (_, _, xp_w) in zip(rv, rw):
        c = 1 if weights is None else weights(beta)
        if c:
            term = linalg.kron(_conv(xm_v, V.backend), _conv(xp_w, V.backend))
            out = out + term * _as_scalar(c, V.backend)
    return out


def _conv(m: np.ndarray, backend: str) -> np.ndarray:
    return m if backend == EXACT else linalg.to_complex(m)


def standard_tensor(V: Representation, W: Representation, s=0) -> Representation:
    """``V ⊗_s W`` for the standard coproduct composed with ``τ_s`` on the first factor."""
    _check_compatible(V, W)
    s = _as_scalar(s, V.backend)
    cd = V.cartan
    Iv, Iw = V.identity(), W.identity()
    xi0 = [linalg.kron(a, Iw) + linalg.kron(Iv, b) for a, b in zip(V.xi0, W.xi0)]
    xp0 = [linalg.kron(a, Iw) + linalg.kron(Iv, b) for a, b in zip(V.xp0, W.xp0)]
    xm0 = [linalg.kron(a, Iw) + linalg.kron(Iv, b) for a, b in zip(V.xm0, W.xm0)]
    t1 = []
    for i in range(cd.rank):
        alpha_i = tuple(int(j == i) for j in range(cd.rank))
        corr = root_vector_tensor(V, W, lambda beta: cd.inner(beta, alpha_i))
        t = linalg.kron(V.t1[i] + V.xi0[i] * s, Iw) + linalg.kron(Iv, W.t1[i]) - corr * V.hbar
        t1.append(t)
    poles = None
    if V.declared_poles is not None and W.declared_poles is not None:
        poles = _dedupe([p + s for p in V.declared_poles] + list(W.declared_poles))
    prov = {"kind": "standard_tensor", "s": s, "left": V.provenance, "right": W.provenance}
    return Representation(cd, V.hbar, xi0, xp0, xm0, t1, poles, prov)


def standard_tensor_t1_symbolic(V: Representation, W: Representation) -> list[RatMat]:
    """``Δ_s(t_{i,1})`` on ``V ⊗ W`` as a matrix linear in ``s``."""
    base = standard_tensor(V, W, 0)
    s = RatFun.x(V.backend)
    out = []
    for i in range(V.cartan.rank):
        shift = RatMat.const(linalg.kron(V.xi0[i], W.identity())) * s
        out.append(RatMat.const(base.t1[i]) + shift)
    return out


# ---------------------------------------------------------------------------
# relation checks


def sample_points(count: int, avoid, seed: int = 0, backend: str = EXACT, radius: int = 10) -> list:
    """Seeded exact sample points away from ``avoid``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        re_ = Fraction(rng.randint(-radius * 12, radius * 12), rng.choice([3, 5, 7, 11, 13]))
        im_ = Fraction(rng.randint(-radius * 4, radius * 4), rng.choice([3, 7, 9]))
        p = QI(re_, im_)
        if backend == FLOAT:
            p = complex(p)
        if any(abs(complex(p) - complex(q)) < 0.25 for q in list(avoid) + out):
            continue
        out.append(p)
    return out


def _avoid_for(V: Representation) -> list:
    pts = list(V.pole_set())
    h = V.hbar
    # shifted currents appear at u ± ħ d_i a_ij / 2 in the field relations
    ext = []
    for p in pts:
        for k in range(-6, 7):
            ext.append(p + h * Fraction(k, 2))
    return ext


def verify_relations(V: Representation, samples: int = 5, seed: int = 0, tol: float = 0.0,
                     include_zero_modes: bool = True) -> Report:
    """Check the field relations and the zero-mode relations on ``V``."""
    rep = Report("relations", seed=seed)
    cd = V.cartan
    n = cd.rank
    exact = V.backend == EXACT
    if not exact and tol == 0.0:
        tol = 1e-9
    u = RatFun.x(V.backend)
    h = V.hbar
    half = _as_scalar(Fraction(1, 2), V.backend)
    vs = sample_points(samples, _avoid_for(V), seed, V.backend)
    cur = [V.currents(i) for i in range(n)]

    def res(x):
        return residual_norm(x)

    if include_zero_modes:
        worst = 0.0
        for i in range(n):
            for j in range(n):
                worst = max(worst, res(linalg.commutator(V.xi0[i], V.xi0[j])))
                worst = max(worst, res(linalg.commutator(V.t1[i], V.t1[j])))
                worst = max(worst, res(linalg.commutator(V.xi0[i], V.t1[j])))
                target = V.xi0[i] if i == j else V.zero()
                worst = max(worst, res(linalg.commutator(V.xp0[i], V.xm0[j]) - target))
                for sign, x0 in ((1, V.xp0[j]), (-1, V.xm0[j])):
                    c = _as_scalar(sign * cd.d[i] * cd.cartan[i][j], V.backend)
                    worst = max(worst, res(linalg.commutator(V.xi0[i], x0) - x0 * c))
                    worst = max(worst, res(linalg.commutator(V.t1[i], x0) - V.x_mode(j, 1, sign) * c))
        rep.add("zero_modes", "zero-mode relations of the generating set", worst, tol)

    # Y1
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for v in vs:
                Xv = cur[j].xi(v)
                worst = max(worst, res(cur[i].xi @ Xv - (Xv @ cur[i].xi)))
    rep.add("Y1", "ξ_i(u) and ξ_j(v) commute", worst, tol, vs)

    # Y2
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for sign in (1, -1):
                xj = cur[j].xp if sign > 0 else cur[j].xm
                c = _as_scalar(sign * cd.d[i] * cd.cartan[i][j], V.backend)
                worst = max(worst, res(V.xi0[i] @ xj - (xj @ V.xi0[i]) - xj * c))
    rep.add("Y2", "ξ_{i,0} grades the currents x_j^±(u)", worst, tol)

    # Y3
    worst = 0.0
    for i in range(n):
        for j in range(n):
            a = h * half * cd.d[i] * cd.cartan[i][j]
            for sign in (1, -1):
                xj = cur[j].xp if sign > 0 else cur[j].xm
                xj_shift = xj.compose_linear(1, -sign * a)
                for v in vs:
                    X = xj(v)
                    lhs = (cur[i].xi @ X) * (u - v - sign * a)
                    rhs = (X @ cur[i].xi) * (u - v + sign * a) - (xj_shift @ cur[i].xi) * (2 * sign * a)
                    worst = max(worst, res(lhs - rhs))
    rep.add("Y3", "exchange relation of ξ_i(u) with x_j^±(v)", worst, tol, vs)

    # Y4
    worst = 0.0
    for i in range(n):
        for j in range(n):
            a = h * half * cd.d[i] * cd.cartan[i][j]
            for sign in (1, -1):
                xi_ = cur[i].xp if sign > 0 else cur[i].xm
                xj = cur[j].xp if sign > 0 else cur[j].xm
                xi0 = V.xp0[i] if sign > 0 else V.xm0[i]
                xj0 = V.xp0[j] if sign > 0 else V.xm0[j]
                for v in vs:
                    X = xj(v)
                    lhs = (xi_ @ X) * (u - v - sign * a)
                    corr = RatMat.const(linalg.commutator(xi0, X)) - (xi_ @ xj0 - (xj0 @ xi_))
                    rhs = (X @ xi_) * (u - v + sign * a) + corr * h
                    worst = max(worst, res(lhs - rhs))
    rep.add("Y4", "exchange relation of x_i^±(u) with x_j^±(v)", worst, tol, vs)

    # Y5
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for v in vs:
                X = cur[j].xm(v)
                lhs = (cur[i].xp @ X - (X @ cur[i].xp)) * (u - v)
                if i == j:
                    lhs = lhs + (cur[i].xi - cur[i].xi(v)) * h
                worst = max(worst, res(lhs))
    rep.add("Y5", "(u-v)[x_i^+(u), x_j^-(v)] = -δ_ij ħ(ξ_i(u) - ξ_i(v))", worst, tol, vs)

    # Y6
    if n >= 2:
        worst = 0.0
        rng = random.Random(seed + 1)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = 1 - cd.cartan[i][j]
                for sign in (1, -1):
                    pts = sample_points(m + 1, _avoid_for(V), rng.randint(0, 10 ** 6), V.backend)
                    xs = [(cur[i].xp if sign > 0 else cur[i].xm)(p) for p in pts[:m]]
                    y = (cur[j].xp if sign > 0 else cur[j].xm)(pts[m])
                    total = V.zero()
                    for perm in itertools.permutations(range(m)):
                        acc = y
                        for k in reversed(perm):
                            acc = linalg.commutator(xs[k], acc)
                        total = total + acc
                    worst = max(worst, res(total))
        rep.add("Y6", "Serre relations for the currents", worst, tol)
    return rep.finish()


def check_mode_shift(V: Representation) -> float:
    """Residual of ``[t_{i,1}, x^±_{j,0}] = ±d_i a_ij x^±_{j,1}`` with ``x_{j,1}`` from the currents."""
    worst = 0.0
    cd = V.cartan
    for i in range(cd.rank):
        for j in range(cd.rank):
            c = V.currents(j)
            for sign, cur, x0 in ((1, c.xp, V.xp0[j]), (-1, c.xm, V.xm0[j])):
                ser = cur.series_at_infinity(2)
                x1 = ser[2] * (V.hbar ** -1 if V.backend == EXACT else 1 / V.hbar)
                k = _as_scalar(sign * cd.d[i] * cd.cartan[i][j], V.backend)
                worst = max(worst, residual_norm(linalg.commutator(V.t1[i], x0) - x1 * k))
    return worst


def ensure_no_collision(points_a, points_b, what: str = "pole sets") -> None:
    for p in points_a:
        for q in points_b:
            if p == q or abs(complex(p) - complex(q)) < 1e-12:
                raise PoleCollisionError(f"{what} meet at {p}")
