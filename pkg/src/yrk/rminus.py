"""The lower triangular factor ``R⁻(s)`` and its verification."""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import numpy as np

from . import linalg
from .cartan import root_vectors_in
from .drinfeld import drinfeld_tensor, drinfeld_tensor_symbolic, pole_data
from .errors import MathDomainError, SchemaError
from .ratfun import RatFun
from .ratmat import RatMat, conjugate, kron as rkron, rat_linear_solve
from .report import Report, residual_norm
from .repn import (Representation, _as_scalar, _check_compatible, realization,
                   sample_points, standard_tensor, standard_tensor_t1_symbolic)
from .scalars import EXACT, QI

ANCHOR_T = "R⁻(s) intertwines Δ_s(t_{i,1}) and Δᴰ_s(t_{i,1})"
ANCHOR_X = "R⁻(s) intertwines Δ_s(x^±_{i,0}) and Δᴰ_s(x^±_{i,0})"


def _h_values(cd, h) -> list:
    if h is None:
        return [Fraction(1)] * cd.rank
    vals = [Fraction(x) if not isinstance(x, (QI, complex)) else x for x in h]
    if len(vals) != cd.rank:
        raise SchemaError("h must give one value α_i(h) per node")
    return vals


def t_of_h(V: Representation, hvals) -> np.ndarray:
    """``T(h) = sum_i c_i t_{i,1}`` where ``h = sum_i c_i d_i h_i``."""
    cd = V.cartan
    out = V.zero()
    for i in range(cd.rank):
        c = sum((cd.B_inv[i][j] * hvals[j] for j in range(cd.rank)), Fraction(0))
        if c:
            out = out + V.t1[i] * _as_scalar(c, V.backend)
    return out


def beta_of_h(beta, hvals):
    return sum((b * v for b, v in zip(beta, hvals)), Fraction(0))


def _real_fraction(x) -> Fraction:
    if isinstance(x, QI):
        return Fraction(int(x.re.numerator), int(x.re.denominator))
    return Fraction(round(complex(x).real * 2), 2)


def _pair_index(V1: Representation, V2: Representation) -> dict:
    """Map ``(μ1, μ2)`` to the basis indices of ``V1 ⊗ V2`` with those weights."""
    out: dict = {}
    for a in range(V1.dim):
        for b in range(V2.dim):
            out.setdefault((V1.weight(a), V2.weight(b)), []).append(a * V2.dim + b)
    return out


def _sub(w, d):
    return tuple(x - y for x, y in zip(w, d))


def _add(w, d):
    return tuple(x + y for x, y in zip(w, d))


def reachable_betas(V1: Representation, V2: Representation) -> list[tuple[int, ...]]:
    """Nonzero ``β ∈ Q_+`` with some weight pair ``(μ1, μ2) -> (μ1-β, μ2+β)``, by height."""
    cd = V1.cartan
    w1 = set(V1.weights())
    w2 = set(V2.weights())
    out = set()
    for a in w1:
        for b in w1:
            k = cd.root_coords([_real_fraction(x - y) for x, y in zip(a, b)])
            if any(x.denominator != 1 for x in k) or min(k) < 0 or not any(k):
                continue
            beta = tuple(int(x) for x in k)
            dw = cd.weight_of(beta)
            if any(_add(m, dw) in w2 for m in w2):
                out.add(beta)
    return sorted(out, key=lambda b: (sum(b), b))


def rminus_blocks(V1: Representation, V2: Representation, h=None, s=None) -> dict:
    """Blocks ``R⁻(s)_β`` keyed by ``β``; symbolic in ``s`` when ``s`` is ``None``."""
    _check_compatible(V1, V2)
    cd = V1.cartan
    hvals = _h_values(cd, h)
    backend = V1.backend
    n = V1.dim * V2.dim
    symbolic = s is None
    if not symbolic:
        s = _as_scalar(s, backend)
    betas = reachable_betas(V1, V2)
    if not betas:
        return {}
    T = linalg.kron(t_of_h(V1, hvals), V2.identity()) + linalg.kron(V1.identity(), t_of_h(V2, hvals))
    z = realization(cd)
    rv1 = root_vectors_in(z.roots, V1.xp0, V1.xm0)
    rv2 = root_vectors_in(z.roots, V2.xp0, V2.xm0)
    r_alpha = {}
    for (alpha, xm1, _), (_, _, xp2) in zip(rv1, rv2):
        m = linalg.kron(xm1, xp2)
        if not linalg.is_zero(m):
            r_alpha[alpha] = m
    pairs = _pair_index(V1, V2)
    blocks: dict = {}
    ident = RatMat.identity(n, backend) if symbolic else linalg.eye(n, backend)
    svar = RatFun.x(backend) if symbolic else s
    for beta in betas:
        bh = beta_of_h(beta, hvals)
        if not bh:
            raise MathDomainError(f"h is not regular: β(h) = 0 for β = {beta}")
        rhs = None
        for alpha, m in r_alpha.items():
            prev_key = tuple(b - a for b, a in zip(beta, alpha))
            if min(prev_key) < 0:
                continue
            prev = ident if not any(prev_key) else blocks.get(prev_key)
            if prev is None:
                continue
            prod = prev @ m if symbolic else linalg.matmul(prev, m)
            term = prod * (_as_scalar(-alpha_h(alpha, hvals), backend) * V1.hbar)
            rhs = term if rhs is None else rhs + term
        if rhs is None:
            continue
        dw = cd.weight_of(beta)
        X = RatMat.zeros((n, n), backend) if symbolic else linalg.zeros((n, n), backend)
        nonzero = False
        for (m1, m2), cols in pairs.items():
            rows = pairs.get((_sub(m1, dw), _add(m2, dw)))
            if not rows:
                continue
            sol = _solve_block(T, rhs, rows, cols, svar * _as_scalar(bh, backend), symbolic, backend)
            if sol is None:
                continue
            for a, r in enumerate(rows):
                for b, c in enumerate(cols):
                    if symbolic:
                        X.a[r, c] = sol[a, b]
                    else:
                        X[r, c] = sol[a, b]
            nonzero = True
        if nonzero:
            blocks[beta] = X
    return blocks


def alpha_h(alpha, hvals):
    return beta_of_h(alpha, hvals)


def _solve_block(T, rhs, rows, cols, sb, symbolic: bool, backend: str):
    """Solve ``T_rr X - X T_cc - sβ(h) X = rhs_rc`` for the block ``X``."""
    nr, nc = len(rows), len(cols)
    if symbolic:
        sub = rhs.a[np.ix_(rows, cols)]
        if all(f.is_zero() for f in sub.flat):
            return None
    else:
        sub = rhs[np.ix_(rows, cols)]
        if linalg.is_zero(sub):
            return None
    Trr = T[np.ix_(rows, rows)]
    Tcc = T[np.ix_(cols, cols)]
    K = linalg.kron(Trr, linalg.eye(nc, backend)) - linalg.kron(linalg.eye(nr, backend), Tcc.T.copy())
    if symbolic:
        M = RatMat.const(K) - RatMat.identity(nr * nc, backend) * sb
        b = RatMat._wrap(sub.reshape(nr * nc, 1).copy(), backend)
        x = rat_linear_solve(M, b)
        return x.a.reshape(nr, nc)
    M = K - linalg.eye(nr * nc, backend) * sb
    x = linalg.solve(M, sub.reshape(nr * nc, 1).copy())
    return x.reshape(nr, nc)


def rminus_recursive(V1: Representation, V2: Representation, h=None, s=None):
    """``R⁻_{V1,V2}(s)``: a RatMat in ``s``, or its value at a given ``s``."""
    blocks = rminus_blocks(V1, V2, h, s)
    n = V1.dim * V2.dim
    if s is None:
        out = RatMat.identity(n, V1.backend)
    else:
        out = linalg.eye(n, V1.backend)
    for X in blocks.values():
        out = out + X
    return out


# ---------------------------------------------------------------------------
# closed form for sl2


def _power_list(F: RatMat) -> list[RatMat]:
    """``[F, F^2, ...]`` until the power vanishes."""
    out = []
    P = F
    while not P.is_zero():
        out.append(P)
        P = P @ F
        if len(out) > F.shape[0]:
            raise MathDomainError("current is not nilpotent")
    return out


def omega_terms(V1: Representation, V2: Representation, s=None) -> list:
    """``ω_k = (-1)^k/(kħ) Res_{σ(V2)} x^-(u-s)^k ⊗ x^+(u)^k``, k = 1, 2, ..."""
    if V1.rank != 1:
        raise SchemaError("the closed form is only available for sl2")
    _check_compatible(V1, V2)
    backend = V1.backend
    Fp = _power_list(V1.currents(0).xm)
    Gp = _power_list(V2.currents(0).xp)
    n = V1.dim * V2.dim
    out = []
    for k in range(1, min(len(Fp), len(Gp)) + 1):
        F, G = Fp[k - 1], Gp[k - 1]
        acc = RatMat.zeros((n, n), backend) if s is None else linalg.zeros((n, n), backend)
        derivs = [F]
        for p, cs in pole_data(G):
            while len(derivs) < len(cs):
                derivs.append(derivs[-1].derivative())
            for m, C in enumerate(cs, start=1):
                scale = _as_scalar(Fraction(1, factorial(m - 1)), backend)
                if s is None:
                    acc = acc + rkron(derivs[m - 1].compose_linear(-1, p), C) * scale
                else:
                    acc = acc + linalg.kron(derivs[m - 1](p - _as_scalar(s, backend)), C) * scale
        coef = _as_scalar(Fraction((-1) ** k, k), backend) * (V1.hbar ** -1 if backend == EXACT else 1 / V1.hbar)
        out.append(acc * coef)
    return out


def rminus_sl2_closed_form(V1: Representation, V2: Representation, s=None):
    """Resummed product of the ``ω_k`` with weights ``1/(k1 (k1+k2) ...)``."""
    omegas = omega_terms(V1, V2, s)
    n = V1.dim * V2.dim
    backend = V1.backend
    ident = RatMat.identity(n, backend) if s is None else linalg.eye(n, backend)
    # R_n = (1/n) sum_k R_{n-k} ω_k
    R = [ident]
    total = ident
    for N in range(1, n * n + 1):
        acc = None
        for k in range(1, min(N, len(omegas)) + 1):
            term = R[N - k] @ omegas[k - 1] if s is None else linalg.matmul(R[N - k], omegas[k - 1])
            acc = term if acc is None else acc + term
        if acc is None:
            break
        acc = acc * _as_scalar(Fraction(1, N), backend)
        if (acc.is_zero() if s is None else linalg.is_zero(acc)):
            break
        R.append(acc)
        total = total + acc
    return total


# ---------------------------------------------------------------------------
# R⁺


def unipotent_inverse(M):
    """Inverse of ``I + N`` with ``N`` nilpotent, by the finite Neumann series."""
    n = M.shape[0]
    if isinstance(M, RatMat):
        N = M - RatMat.identity(n, M.backend)
        out = RatMat.identity(n, M.backend)
        P = RatMat.identity(n, M.backend)
        for _ in range(n):
            P = -(P @ N)
            if P.is_zero():
                break
            out = out + P
        return out
    backend = linalg.backend_of_array(M)
    N = M - linalg.eye(n, backend)
    out = linalg.eye(n, backend)
    P = linalg.eye(n, backend)
    for _ in range(n):
        P = -linalg.matmul(P, N)
        if linalg.is_zero(P, tol=0.0):
            break
        out = out + P
    return out


def rplus_from_rminus(Rm21, d1: int, d2: int, s=None):
    """``R⁺_{V1,V2}(s) = flip ∘ R⁻_{V2,V1}(-s)^{-1} ∘ flip``.

    ``Rm21`` is ``R⁻_{V2,V1}`` as a RatMat (then ``s`` is ignored) or its value at ``-s``.
    """
    backend = Rm21.backend if isinstance(Rm21, RatMat) else linalg.backend_of_array(Rm21)
    P = linalg.flip_matrix(d2, d1, backend)
    if isinstance(Rm21, RatMat):
        X = unipotent_inverse(Rm21.compose_linear(-1, 0))
        return conjugate(P, X)
    X = unipotent_inverse(Rm21)
    return linalg.matmul(linalg.matmul(P, X), P.T.copy())


def rplus(V1: Representation, V2: Representation, h=None, s=None):
    if s is None:
        return rplus_from_rminus(rminus_recursive(V2, V1, h), V1.dim, V2.dim)
    s = _as_scalar(s, V1.backend)
    return rplus_from_rminus(rminus_recursive(V2, V1, h, -s), V1.dim, V2.dim)


# ---------------------------------------------------------------------------
# checks


def r_tensor(V1: Representation, V2: Representation) -> np.ndarray:
    """``𝔯 = sum_β x^-_β ⊗ x^+_β`` on ``V1 ⊗ V2``."""
    from .repn import root_vector_tensor
    return root_vector_tensor(V1, V2)


def check_intertwine_minus(V1: Representation, V2: Representation, h=None, Rm=None) -> Report:
    """Exact intertwining, 1-jet and translation checks for ``R⁻``."""
    rep = Report("rminus_intertwine")
    exact = V1.backend == EXACT
    tol = 0.0 if exact else 1e-9
    if Rm is None:
        Rm = rminus_recursive(V1, V2, h)
    D = drinfeld_tensor_symbolic(V1, V2)
    std_t1 = standard_tensor_t1_symbolic(V1, V2)
    std0 = standard_tensor(V1, V2, 0)
    worst_t = 0.0
    worst_x = 0.0
    for i in range(V1.rank):
        worst_t = max(worst_t, residual_norm(Rm @ std_t1[i] - (D.t1(i) @ Rm)))
        worst_x = max(worst_x, residual_norm(Rm @ std0.xp0[i] - (D.xp0[i] @ Rm)))
        worst_x = max(worst_x, residual_norm(Rm @ std0.xm0[i] - (D.xm0[i] @ Rm)))
    rep.add("intertwine_t1", ANCHOR_T, worst_t, tol)
    rep.add("intertwine_x", ANCHOR_X, worst_x, tol)
    ser = Rm.series_at_infinity(1)
    n = V1.dim * V2.dim
    jet0 = residual_norm(ser[0] - linalg.eye(n, V1.backend))
    jet1 = residual_norm(ser[1] - r_tensor(V1, V2) * V1.hbar)
    rep.add("one_jet", "R⁻(s) = 1 + ħ𝔯/s + O(s⁻²)", max(jet0, jet1), tol)
    return rep.finish()


def check_translation(V1: Representation, V2: Representation, a, b, h=None) -> Report:
    """``R⁻`` for ``(V1(a), V2(b))`` equals ``R⁻(s + a - b)``."""
    rep = Report("rminus_translation")
    R = rminus_recursive(V1, V2, h)
    Rab = rminus_recursive(V1.shift(a), V2.shift(b), h)
    shift = _as_scalar(a, V1.backend) - _as_scalar(b, V1.backend)
    rep.add("translation", "τ_a ⊗ τ_b R⁻(s) = R⁻(s + a - b)",
            residual_norm(Rab - R.compose_linear(1, shift)), 0.0 if V1.backend == EXACT else 1e-9, [a, b])
    return rep.finish()


def _embed(M, pair, dims):
    return linalg.embed(M, pair, dims)


def cocycle_residuals(V1, V2, V3, s1, s2, h=None) -> tuple:
    """Residuals of the Drinfeld-side and standard-side cocycle equations at ``(s1, s2)``."""
    dims = (V1.dim, V2.dim, V3.dim)
    R12 = rminus_recursive(V1, V2, h, s1)
    R23 = rminus_recursive(V2, V3, h, s2)
    R12_ = _embed(R12, (0, 1), dims)
    R23_ = _embed(R23, (1, 2), dims)
    # Drinfeld form
    lhs = linalg.matmul(rminus_recursive(drinfeld_tensor(V1, V2, s1), V3, h, s2), R12_)
    rhs = linalg.matmul(rminus_recursive(V1, drinfeld_tensor(V2, V3, s2), h, s1 + s2), R23_)
    res_v = residual_norm(lhs - rhs)
    # standard form
    lhs = linalg.matmul(R12_, rminus_recursive(standard_tensor(V1, V2, s1), V3, h, s2))
    rhs = linalg.matmul(R23_, rminus_recursive(V1, standard_tensor(V2, V3, s2), h, s1 + s2))
    res_k = residual_norm(lhs - rhs)
    return res_v, res_k


def check_cocycle(V1, V2, V3, samples: int = 10, seed: int = 0, h=None, points=None) -> Report:
    rep = Report("rminus_cocycle", seed=seed)
    exact = V1.backend == EXACT
    tol = 0.0 if exact else 1e-8
    rng = random.Random(seed)
    worst_v = worst_k = 0.0
    used = []
    resampled = 0
    pts = list(points) if points is not None else []
    while len(used) < (len(pts) if points is not None else samples):
        if points is not None:
            s1, s2 = pts[len(used)]
        else:
            s1, s2 = sample_points(2, [], rng.randint(0, 10 ** 9), V1.backend)
        try:
            rv, rk = cocycle_residuals(V1, V2, V3, s1, s2, h)
        except ArithmeticError:
            if points is not None:
                raise
            resampled += 1
            continue
        worst_v, worst_k = max(worst_v, rv), max(worst_k, rk)
        used.append((s1, s2))
    detail = f"resampled {resampled} pole hits" if resampled else ""
    rep.add("cocycle_drinfeld", "cocycle equation with Drinfeld tensor products", worst_v, tol, used, detail)
    rep.add("cocycle_standard", "cocycle equation with standard tensor products", worst_k, tol, used, detail)
    return rep.finish()
