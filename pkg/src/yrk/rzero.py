"""The abelian factor: ``A(s)``, the canonical solutions ``R^{0,↑/↓}``, the formal ``R⁰`` and ``η⁰``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np

from . import linalg
from .drinfeld import drinfeld_tensor
from .errors import MathDomainError, PoleCollisionError, RootFindingError
from .poly import exact_roots
from .ratfun import RatFun
from .ratmat import RatMat
from .report import Report, residual_norm
from .repn import Representation, _as_scalar, _check_compatible
from .scalars import EXACT, QI
from .series import PowerSeries

POLE_CLUSTER_TOL = 1e-9


# ---------------------------------------------------------------------------
# joint eigenvectors of the ξ_i(u)


@dataclass
class XiEigenspace:
    """Joint eigenspace of all ``ξ_i(u)`` with the divisor of each eigenvalue."""

    projector: np.ndarray
    values: list[RatFun]
    zeros: list[list[tuple[object, int]]]
    poles: list[list[tuple[object, int]]]


def _divisor(f: RatFun, numeric: bool):
    return (exact_roots(f.num, allow_numeric=numeric), exact_roots(f.den, allow_numeric=numeric))


def xi_eigenspaces(V: Representation, seed: int = 11) -> list[XiEigenspace]:
    """Decompose ``V`` under the commuting family ``ξ_{i,r}``."""
    rng = random.Random(seed)
    exact = V.backend == EXACT
    gen = V.zero()
    for i in range(V.rank):
        for r in range(V.dim):
            c = Fraction(rng.randint(1, 97), rng.randint(1, 13))
            gen = gen + V.xi_mode(i, r) * _as_scalar(c, V.backend)
    out = []
    total = V.zero()
    for _, P in linalg.eigen_projectors(gen):
        total = total + P
        basis = linalg.column_basis(P)
        v = basis[:, 0]
        k = next(t for t in range(V.dim) if abs(complex(v[t])) > 1e-12)
        values, zeros, poles = [], [], []
        for i in range(V.rank):
            xi = V.currents(i).xi
            col = xi @ RatMat.const(v.reshape(-1, 1).copy())
            f = col.a[k, 0] * (1 / v[k] if not exact else v[k].inverse())
            diff = xi @ RatMat.const(P) - RatMat.const(P) * f
            if residual_norm(diff) > (0.0 if exact else 1e-8):
                raise MathDomainError("ξ-action is not diagonalizable on this module")
            z, p = _divisor(f, not exact)
            values.append(f)
            zeros.append(z)
            poles.append(p)
        out.append(XiEigenspace(P, values, zeros, poles))
    if residual_norm(total - V.identity()) > (0.0 if exact else 1e-8):
        raise MathDomainError("ξ-action is not diagonalizable on this module")
    return out


# ---------------------------------------------------------------------------
# A(s)


def _merge(factors: list, z, m: int, exact: bool) -> None:
    for entry in factors:
        if (entry[0] == z) if exact else abs(complex(entry[0]) - complex(z)) < POLE_CLUSTER_TOL:
            entry[1] += m
            return
    factors.append([z, m])


@dataclass
class AbelianBlock:
    """``A(s) = prod (s + z)^m`` on the image of ``projector``."""

    projector: np.ndarray
    factors: list[tuple[object, int]]

    def value(self, backend: str = EXACT) -> RatFun:
        out = RatFun.one(backend)
        s = RatFun.x(backend)
        for z, m in self.factors:
            lin = s + RatFun.const(z, backend)
            out = out * (lin ** m if m > 0 else (lin ** (-m)).inverse())
        return out

    def at(self, s) -> complex:
        out = 1.0 + 0j
        for z, m in self.factors:
            out *= (complex(s) + complex(z)) ** m
        return out

    def log_coefficients(self, order: int, exact: bool = True) -> list:
        """``log A = sum_k c_k s^-k`` with ``c_k = (-1)^{k+1}/k sum m z^k``."""
        out = [Fraction(0) if exact else 0j]
        for k in range(1, order + 1):
            acc = QI(0) if exact else 0j
            for z, m in self.factors:
                acc = acc + (z ** k if exact else complex(z) ** k) * m
            out.append(acc * (Fraction((-1) ** (k + 1), k) if exact else (-1) ** (k + 1) / k))
        return out


@dataclass
class AbelianOperator:
    V1: Representation
    V2: Representation
    blocks: list[AbelianBlock]
    ell: int = 1

    @property
    def dim(self) -> int:
        return self.V1.dim * self.V2.dim

    @property
    def period(self):
        return self.V1.hbar * self.ell

    def ratmat(self) -> RatMat:
        backend = self.V1.backend
        out = RatMat.zeros((self.dim, self.dim), backend)
        for b in self.blocks:
            out = out + RatMat.const(b.projector) * b.value(backend)
        return out

    def __call__(self, s) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.blocks:
            out = out + linalg.to_complex(b.projector) * b.at(s)
        return out

    def poles(self) -> list:
        """Poles ``P`` of ``A`` and ``Z`` of ``A^{-1}``."""
        P, Z = [], []
        for b in self.blocks:
            for z, m in b.factors:
                (P if m < 0 else Z).append(-z)
        return P, Z


def abelian_A(V1: Representation, V2: Representation) -> AbelianOperator:
    """``A_{V1,V2}(s)`` from the zeros and poles of the ``ξ``-eigenvalues."""
    _check_compatible(V1, V2)
    try:
        E1 = xi_eigenspaces(V1)
        E2 = xi_eigenspaces(V2)
    except RootFindingError:
        # the spectrum leaves Q(i): continue numerically
        V1, V2 = V1.to_float(), V2.to_float()
        E1 = xi_eigenspaces(V1)
        E2 = xi_eigenspaces(V2)
    cd = V1.cartan
    exact = V1.backend == EXACT
    h = V1.hbar
    terms = cd.coupling_terms()
    blocks = []
    for e1 in E1:
        for e2 in E2:
            factors: list = []
            for i, j, r, c in terms:
                shift = h * Fraction(cd.ell + r, 2)
                pts = [(a, -mu) for a, mu in e1.zeros[i]] + [(b, mu) for b, mu in e1.poles[i]]
                for p, w in pts:
                    # F_j(p + σ) with F_j = prod (u - a')/(u - b')
                    for a2, mu2 in e2.zeros[j]:
                        _merge(factors, p - a2 + shift, w * mu2 * c, exact)
                    for b2, mu2 in e2.poles[j]:
                        _merge(factors, p - b2 + shift, -w * mu2 * c, exact)
            factors = [(z, m) for z, m in factors if m]
            blocks.append(AbelianBlock(linalg.kron(e1.projector, e2.projector), factors))
    return AbelianOperator(V1, V2, blocks, cd.ell)


def abelian_A_quadrature(V1: Representation, V2: Representation, s, nodes: int = 400,
                         radius: float | None = None) -> np.ndarray:
    """``A(s)`` from the defining contour integral by the trapezoid rule on a circle."""
    cd = V1.cartan
    h = complex(V1.hbar)
    E1 = xi_eigenspaces(V1)
    E2 = xi_eigenspaces(V2)
    s = complex(s)
    n = V1.dim * V2.dim
    out = np.zeros((n, n), dtype=complex)
    for e1 in E1:
        pts = [complex(p) for i in range(V1.rank) for p, _ in e1.zeros[i] + e1.poles[i]]
        center = sum(pts) / len(pts) if pts else 0j
        rad = radius or (max((abs(p - center) for p in pts), default=0.0) + 0.5 * abs(h))
        theta = np.linspace(0, 2 * np.pi, nodes, endpoint=False)
        vs = center + rad * np.exp(1j * theta)
        dv = 1j * rad * np.exp(1j * theta) * (2 * np.pi / nodes)
        for e2 in E2:
            acc = 0j
            for i, j, r, c in cd.coupling_terms():
                sigma = s + (cd.ell + r) * h / 2
                f = e1.values[i].to_complex() if V1.backend == EXACT else e1.values[i]
                F = e2.values[j].to_complex() if V2.backend == EXACT else e2.values[j]
                df = f.derivative()
                for v, d in zip(vs, dv):
                    fv = complex(f(v))
                    acc += c * complex(df(v)) / fv * _log_series(F, v + sigma) * d
            val = np.exp(-acc / (2j * np.pi))
            out = out + linalg.to_complex(linalg.kron(e1.projector, e2.projector)) * val
    return out


def _log_series(F: RatFun, u: complex) -> complex:
    """``log F(u)`` on the branch tending to 0 at infinity."""
    z, p = _divisor(F, True)
    return sum(m * np.log1p(-complex(a) / u) for a, m in z) - sum(m * np.log1p(-complex(b) / u) for b, m in p)


# ---------------------------------------------------------------------------
# canonical solutions


@dataclass
class RZeroValue:
    matrix: np.ndarray
    terms: int
    tail: float
    method: str = "product"


def _lattice_product(s0: complex, factors, L: complex, tol: float, tail: str, cap: int):
    """``prod_{n>=0} prod_j (s0 + nL + z_j)^{m_j}`` for balanced exponents."""
    if not factors:
        return 1.0 + 0j, 0, 0.0
    zs = [complex(z) for z, _ in factors]
    ms = [m for _, m in factors]
    zmax = max(abs(z) for z in zs)
    for z in zs:
        x = (s0 + z) / L
        if abs(x.imag) < POLE_CLUSTER_TOL and x.real < POLE_CLUSTER_TOL and abs(x.real - round(x.real)) < POLE_CLUSTER_TOL:
            raise PoleCollisionError(f"s lies on the excluded lattice through {-z}")
    if tail == "gamma":
        # prod_n prod_j (x_j + n)^{m_j} = prod_j Γ(x_j)^{-m_j} when sum m = sum m z = 0
        val = mpmath.mpf(1)
        for z, m in zip(zs, ms):
            val *= mpmath.gamma((s0 + z) / L) ** (-m)
        return complex(val), 0, 0.0
    if tail == "zeta":
        n0 = 0
        while abs(s0 + n0 * L) < 4 * zmax + 2 * abs(L) or (s0 + n0 * L).real / abs(L) < 2:
            n0 += 1
        N = n0 + 8
    else:
        N = cap
    acc = 0j
    for n in range(N):
        for z, m in zip(zs, ms):
            acc += m * np.log(s0 + n * L + z)
    # shift the branch: only the product matters
    val = complex(np.exp(acc))
    if tail == "zeta":
        x = s0 / L + N
        est = 0.0
        total = mpmath.mpc(0)
        for k in range(1, 40):
            ck = sum(m * (-1) ** (k + 1) * z ** k / k for z, m in zip(zs, ms))
            if k == 1:
                if abs(ck) > 1e-9 * (1 + zmax):
                    raise MathDomainError("A(s) is not 1 + O(s^-2); the product does not converge")
                continue
            zk = mpmath.zeta(k, x)
            total += ck * L ** (-k) * zk
            # bound on every later term, valid even when some c_k vanish
            est = float(sum(abs(m) for m in ms) * (zmax / abs(L)) ** k / k * abs(zk))
            if est < tol * 1e-3:
                break
        val *= complex(mpmath.exp(total))
        return val, N, est
    # plain truncation: the tail is ~ |c_2| / (L^2 (x - 1))
    c2 = abs(sum(m * z * z for z, m in zip(zs, ms))) / 2
    return val, N, c2 / abs(L) ** 2 / max(abs(s0 / L + N) - 1, 1.0)


def rzero_updown(A: AbelianOperator, s, direction: str = "up", tol: float = 1e-12,
                 tail: str = "zeta", cap: int = 100000) -> RZeroValue:
    """``R^{0,↑}(s) = prod_{n>=0} A(s+nL)^{-1}`` or ``R^{0,↓}(s) = prod_{n>=1} A(s-nL)``.

    ``tail`` is ``"zeta"`` (finite product plus Hurwitz-zeta resummation of
    the logarithmic tail), ``"gamma"`` (closed Γ form) or ``"none"`` (``cap`` factors).
    """
    L = complex(A.period)
    s = complex(s)
    out = np.zeros((A.dim, A.dim), dtype=complex)
    terms, est = 0, 0.0
    for b in A.blocks:
        if direction == "up":
            val, N, e = _lattice_product(s, [(z, -m) for z, m in b.factors], L, tol, tail, cap)
        elif direction == "down":
            val, N, e = _lattice_product(L - s, [(-complex(z), m) for z, m in b.factors], L, tol, tail, cap)
        else:
            raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
        out = out + linalg.to_complex(b.projector) * val
        terms, est = max(terms, N), max(est, e)
    return RZeroValue(out, terms, est, tail)


# ---------------------------------------------------------------------------
# formal series


def g_series(order: int) -> list[Fraction]:
    """Coefficients ``g_0, ..., g_order`` of ``g(x) = sum g_k x^-k`` with ``g(x+1) - g(x) = -x^-2``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    g = [Fraction(0)] * (order + 1)
    # coefficient of x^-N in g(x+1) - g(x): sum_{k<N} g_k C(-k, N-k)
    for N in range(2, order + 2):
        rhs = Fraction(-1 if N == 2 else 0)
        acc = sum((g[k] * _binom_neg(k, N - k) for k in range(1, N - 1)), Fraction(0))
        g[N - 1] = (rhs - acc) / _binom_neg(N - 1, 1)
    return g


def _binom_neg(k: int, j: int) -> int:
    """``C(-k, j)``."""
    return (-1) ** j * comb(k + j - 1, j)


def shift_scalar_series(coeffs: list, a) -> list:
    """Coefficients of ``f(x + a)`` for ``f = sum c_k x^-k``."""
    n = len(coeffs) - 1
    out = [coeffs[0]] + [0 * coeffs[0]] * n
    for p in range(1, n + 1):
        for j in range(0, n - p + 1):
            out[p + j] = out[p + j] + coeffs[p] * _binom_neg(p, j) * a ** j
    return out


def _scalar_ps(values: list, n: int, backend: str) -> PowerSeries:
    return PowerSeries([linalg.eye(n, backend) * _as_scalar(v, backend) for v in values])


def rzero_formal_log(V1: Representation, V2: Representation, order: int) -> PowerSeries:
    """``log R⁰(s)`` through ``s^-order`` from the ``g``-series and the modes ``t_{i,n}``.

    ``log R⁰ = ℓ^-2 sum c_ij^(r) T_{(ℓ+r)ħ/2} sum_{n,m} (-1)^m/(n! m!)
    t_{i,n} ⊗ t_{j,m} ∂_s^{n+m} g(s/ℓħ)``.
    """
    _check_compatible(V1, V2)
    cd = V1.cartan
    backend = V1.backend
    h = V1.hbar
    L = h * cd.ell
    d = V1.dim * V2.dim
    g = g_series(order)
    # G_p = ∂_s^p g(s/L) as scalar series in s^-1
    G = [_scalar_ps([_as_scalar(g[k], backend) * L ** k for k in range(order + 1)], 1, backend)]
    for p in range(1, order):
        G.append(G[-1].derivative())
    tm1 = [V1.t_modes(i, order) for i in range(cd.rank)]
    tm2 = [V2.t_modes(i, order) for i in range(cd.rank)]
    total = PowerSeries.zero((d, d), order, backend)
    inv_l2 = _as_scalar(Fraction(1, cd.ell ** 2), backend)
    for i, j, r, c in cd.coupling_terms():
        inner = PowerSeries.zero((d, d), order, backend)
        for n in range(order):
            for m in range(order - n):
                coef = _as_scalar(Fraction((-1) ** m, factorial(n) * factorial(m)), backend)
                op = linalg.kron(tm1[i][n], tm2[j][m]) * coef
                if linalg.is_zero(op):
                    continue
                inner = inner + PowerSeries([op * G[n + m].coeffs[k][0, 0] for k in range(order + 1)])
        total = total + inner.shift(h * Fraction(cd.ell + r, 2)).scale(inv_l2 * c)
    return total


def rzero_formal(V1: Representation, V2: Representation, order: int) -> PowerSeries:
    """The formal abelian R-matrix ``R⁰(s) = exp(log R⁰(s))`` through ``s^-order``."""
    return rzero_formal_log(V1, V2, order).exp()


def rzero_formal_diagonal(A: AbelianOperator, order: int) -> PowerSeries:
    """``R⁰`` by solving ``f(s+L) - f(s) = log A(s)`` blockwise on series."""
    backend = A.V1.backend
    exact = backend == EXACT
    L = A.period
    d = A.dim
    total = PowerSeries.zero((d, d), order, backend)
    for b in A.blocks:
        c = b.log_coefficients(order + 1, exact)
        f = [c[0] * 0] * (order + 1)
        # coefficient of s^-N in f(s+L) - f(s): sum_{k<N} f_k C(-k, N-k) L^{N-k}
        for N in range(2, order + 2):
            acc = c[N] * 0
            for k in range(1, N - 1):
                acc = acc + f[k] * _binom_neg(k, N - k) * L ** (N - k)
            f[N - 1] = (c[N] - acc) * ((_binom_neg(N - 1, 1) * L) ** -1 if exact
                                      else 1 / (_binom_neg(N - 1, 1) * L))
        total = total + PowerSeries([b.projector * _as_scalar(x, backend) if exact
                                     else linalg.to_complex(b.projector) * complex(x) for x in f])
    return total.exp()


def A_series(A: AbelianOperator, order: int) -> PowerSeries:
    return PowerSeries(A.ratmat().series_at_infinity(order))


# ---------------------------------------------------------------------------
# checks


def _flip(d1: int, d2: int, backend: str = EXACT) -> np.ndarray:
    return linalg.flip_matrix(d1, d2, backend)


def check_difference_and_unitarity(V1: Representation, V2: Representation, samples: list,
                                   tol: float = 1e-8, tail: str = "zeta") -> Report:
    """``R↑(s+L) = A(s) R↑(s)`` and ``flip R↑_{12}(-s) flip = R↓_{21}(s)^-1``."""
    rep = Report("rzero_difference_unitarity")
    A = abelian_A(V1, V2)
    A21 = abelian_A(V2, V1)
    L = complex(A.period)
    P = linalg.to_complex(_flip(V1.dim, V2.dim))
    worst_d = worst_u = 0.0
    for s in samples:
        up = rzero_updown(A, s, "up", tail=tail).matrix
        up_next = rzero_updown(A, complex(s) + L, "up", tail=tail).matrix
        worst_d = max(worst_d, linalg.max_abs(up_next - A(s) @ up))
        up_neg = rzero_updown(A, -complex(s), "up", tail=tail).matrix
        down21 = rzero_updown(A21, s, "down", tail=tail).matrix
        worst_u = max(worst_u, linalg.max_abs(P @ up_neg @ P.T - np.linalg.inv(down21)))
    rep.add("difference_equation", "R⁰(s + ℓħ) = A(s) R⁰(s)", worst_d, tol, samples)
    rep.add("abelian_unitarity", "flip R^{0,↑}(-s) flip = R^{0,↓}_{21}(s)^{-1}", worst_u, tol, samples)
    return rep.finish()


def monodromy_eta0(V1: Representation, V2: Representation, samples: list, tol: float = 1e-8,
                   spread: float = 1e-3) -> Report:
    """``η⁰ = (R^{0,↑})^{-1} R^{0,↓}`` is ``ℓħ``-periodic and non-constant."""
    rep = Report("monodromy")
    A = abelian_A(V1, V2)
    L = complex(A.period)
    vals = []
    worst = 0.0
    for s in samples:
        eta = np.linalg.solve(rzero_updown(A, s, "up").matrix, rzero_updown(A, s, "down").matrix)
        eta_next = np.linalg.solve(rzero_updown(A, complex(s) + L, "up").matrix,
                                   rzero_updown(A, complex(s) + L, "down").matrix)
        worst = max(worst, linalg.max_abs(eta_next - eta))
        vals.append(eta)
    dev = max((linalg.max_abs(a - b) for a in vals for b in vals), default=0.0)
    rep.add("eta_periodic", "η⁰(s + ℓħ) = η⁰(s)", worst, tol, samples)
    rep.add("eta_nonconstant", "η⁰ is not constant", dev, spread, samples,
            detail="max pairwise deviation", passed=dev > spread)
    return rep.finish()


def eta0(A: AbelianOperator, s) -> np.ndarray:
    return np.linalg.solve(rzero_updown(A, s, "up").matrix, rzero_updown(A, s, "down").matrix)


def check_rzero_cabling(V1: Representation, V2: Representation, V3: Representation, s1, s2,
                        direction: str = "up", tol: float = 1e-8) -> Report:
    """Both cabling identities for ``R^{0,ε}`` with Drinfeld tensor products."""
    rep = Report("rzero_cabling")
    dims = (V1.dim, V2.dim, V3.dim)
    s12 = _as_scalar(s1, V1.backend) + _as_scalar(s2, V1.backend)

    def R(Va, Vb, s):
        return rzero_updown(abelian_A(Va, Vb), s, direction).matrix

    lhs = R(drinfeld_tensor(V1, V2, s1), V3, s2)
    rhs = linalg.embed(R(V1, V3, s12), (0, 2), dims) @ linalg.embed(R(V2, V3, s2), (1, 2), dims)
    first = linalg.max_abs(lhs - rhs)
    lhs = R(V1, drinfeld_tensor(V2, V3, s2), s12)
    rhs = linalg.embed(R(V1, V3, s12), (0, 2), dims) @ linalg.embed(R(V1, V2, s1), (0, 1), dims)
    second = linalg.max_abs(lhs - rhs)
    rep.add("rzero_cabling_left", "R⁰_{V1⊗V2,V3}(s2) = R⁰_{13}(s1+s2) R⁰_{23}(s2)", first, tol, [s1, s2])
    rep.add("rzero_cabling_right", "R⁰_{V1,V2⊗V3}(s1+s2) = R⁰_{13}(s1+s2) R⁰_{12}(s1)", second, tol, [s1, s2])
    return rep.finish()


def asymptotic_errors(V1: Representation, V2: Representation, s, kmax: int = 4,
                      direction: str = "up") -> list[float]:
    """``|R^{0,ε}(s) - sum_{k'<=k} R⁰_{k'} s^-k'|`` for ``k = 0..kmax``."""
    A = abelian_A(V1, V2)
    val = rzero_updown(A, s, direction).matrix
    ser = rzero_formal(V1, V2, kmax)
    return [linalg.max_abs(val - ser.partial_sum(s, k)) for k in range(kmax + 1)]
