"""Root data, q-number coupling matrices and a zero-mode realization of g."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg
from .errors import MathDomainError, SchemaError
from .poly import Poly
from .scalars import EXACT, QI

# ---------------------------------------------------------------------------
# Laurent polynomials in q


class LaurentPoly:
    """Finite sum ``sum_k c_k q^k`` with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def qnum(cls, n: int) -> "LaurentPoly":
        """``[n]_q = (q^n - q^-n)/(q - q^-1)``, odd in ``n``."""
        if n == 0:
            return cls()
        sign = 1 if n > 0 else -1
        n = abs(n)
        return cls({n - 1 - 2 * k: sign for k in range(n)})

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: v * other for k, v in self.terms.items()})
        out: dict[int, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == LaurentPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def _to_poly(self) -> tuple[int, Poly]:
        lo = min(self.terms) if self.terms else 0
        hi = max(self.terms) if self.terms else 0
        return lo, Poly([self.terms.get(k, 0) for k in range(lo, hi + 1)])

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        lo1, p1 = self._to_poly()
        lo2, p2 = other._to_poly()
        q, r = p1.divmod(p2)
        if not r.is_zero():
            raise MathDomainError("Laurent polynomial division is not exact")
        return LaurentPoly({k + lo1 - lo2: Fraction(int(c.re.numerator), int(c.re.denominator))
                            for k, c in enumerate(q.c)})

    def at(self, q) -> Fraction:
        return sum((v * Fraction(q) ** k for k, v in self.terms.items()), Fraction(0))

    def inverted(self) -> "LaurentPoly":
        """Substitute ``q -> q^-1``."""
        return LaurentPoly({-k: v for k, v in self.terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.inverted()

    def has_nonneg_integer_coeffs(self) -> bool:
        return all(v >= 0 and v.denominator == 1 for v in self.terms.values())

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.items():
            parts.append(f"{v}" if k == 0 else f"{v}*q^{k}")
        return " + ".join(parts)


def laurent_det(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    out = LaurentPoly()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * laurent_det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


# ---------------------------------------------------------------------------
# Cartan data

_BUILTIN = {
    "A1": dict(cartan=[[2]], d=[1], hdual=2, m=1),
    "A2": dict(cartan=[[2, -1], [-1, 2]], d=[1, 1], hdual=3, m=1),
    # α1 long, α2 short
    "B2": dict(cartan=[[2, -1], [-2, 2]], d=[2, 1], hdual=3, m=2),
    # α1 short, α2 long
    "C2": dict(cartan=[[2, -2], [-1, 2]], d=[1, 2], hdual=3, m=2),
}
_ALIASES = {"sl2": "A1", "sl3": "A2", "so5": "B2", "sp4": "C2"}


@dataclass(frozen=True)
class CartanData:
    """Finite-type Cartan data with symmetrizers ``d_i`` (short roots have length 2)."""

    cartan: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    hdual: int
    m: int
    name: str | None = None

    def __post_init__(self):
        A, d = self.cartan, self.d
        n = len(A)
        if any(len(row) != n for row in A) or len(d) != n:
            raise SchemaError("Cartan matrix must be square and match the symmetrizers")
        for i in range(n):
            if A[i][i] != 2:
                raise SchemaError("Cartan matrix must have 2 on the diagonal")
            for j in range(n):
                if d[i] * A[i][j] != d[j] * A[j][i]:
                    raise SchemaError("d_i a_ij must be symmetric")
        if min(d) != 1:
            raise SchemaError("symmetrizers must be normalised with min d_i = 1")

    # -- construction ---------------------------------------------------
    @classmethod
    def of_type(cls, name: str) -> "CartanData":
        key = _ALIASES.get(name.lower(), name.upper())
        if key not in _BUILTIN:
            raise SchemaError(f"unknown Cartan type {name!r}")
        spec = _BUILTIN[key]
        return cls(tuple(map(tuple, spec["cartan"])), tuple(spec["d"]), spec["hdual"], spec["m"], key)

    @classmethod
    def from_json(cls, obj) -> "CartanData":
        if isinstance(obj, str):
            return cls.of_type(obj)
        if "type" in obj:
            return cls.of_type(obj["type"])
        try:
            cd = cls(tuple(map(tuple, obj["cartan"])), tuple(obj["d"]), int(obj["hdual"]), int(obj["m"]))
        except KeyError as exc:
            raise SchemaError(f"missing Cartan field {exc}") from None
        if cd.hdual != cd.computed_hdual() or cd.m != cd.computed_m():
            raise SchemaError("supplied hdual/m disagree with the root system")
        cd.q_coupling_matrix()  # validates polynomiality
        return cd

    def to_json(self) -> dict:
        if self.name:
            return {"type": self.name}
        return {"cartan": [list(r) for r in self.cartan], "d": list(self.d),
                "hdual": self.hdual, "m": self.m}

    # -- basic data -----------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.d)

    @property
    def ell(self) -> int:
        return self.m * self.hdual

    @cached_property
    def B(self) -> tuple[tuple[int, ...], ...]:
        """Symmetrized matrix ``(α_i, α_j) = d_i a_ij``."""
        return tuple(tuple(self.d[i] * self.cartan[i][j] for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def B_inv(self) -> tuple[tuple[Fraction, ...], ...]:
        return _frac_inverse(self.B)

    @cached_property
    def A_inv(self) -> tuple[tuple[Fraction, ...], ...]:
        return _frac_inverse(self.cartan)

    def inner(self, beta, gamma) -> int:
        """``(β, γ)`` for root-lattice coordinates."""
        return sum(beta[i] * self.B[i][j] * gamma[j] for i in range(self.rank) for j in range(self.rank))

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots in simple-root coordinates, sorted by height then lexicographically."""
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        roots = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    # α_i-string through β: β - pα_i, ..., β + qα_i with p - q = <β, α_i^∨>
                    p = 0
                    while True:
                        cand = tuple(beta[j] - (p + 1) * (j == i) for j in range(n))
                        if cand in roots:
                            p += 1
                        else:
                            break
                    pairing = sum(beta[j] * self.cartan[i][j] for j in range(n))
                    if p - pairing > 0:
                        up = tuple(beta[j] + (j == i) for j in range(n))
                        if up not in roots:
                            roots.add(up)
                            nxt.append(up)
            layer = nxt
        return tuple(sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r))))

    @property
    def highest_root(self) -> tuple[int, ...]:
        return self.positive_roots[-1]

    def computed_m(self) -> int:
        return self.inner(self.highest_root, self.highest_root) // 2

    def computed_hdual(self) -> int:
        theta = self.highest_root
        dtheta = Fraction(self.inner(theta, theta), 2)
        return int(1 + sum(Fraction(theta[i] * self.d[i]) / dtheta for i in range(self.rank)))

    def height(self, beta) -> int:
        return sum(beta)

    def weight_of(self, beta) -> tuple[int, ...]:
        """Eigenvalues of ``ξ_{i,0}`` on a vector of weight ``β``: ``(B β)_i``."""
        return tuple(sum(self.B[i][j] * beta[j] for j in range(self.rank)) for i in range(self.rank))

    def root_coords(self, weight_diff) -> tuple[Fraction, ...]:
        """Invert :meth:`weight_of` on a ξ-eigenvalue difference."""
        return tuple(sum(self.B_inv[i][j] * Fraction(weight_diff[j]) for j in range(self.rank))
                     for i in range(self.rank))

    def fundamental_coweights(self) -> tuple[tuple[Fraction, ...], ...]:
        """``ϖ_i^∨ = sum_j (A^-1)_{ij} h_j``, as rows of coefficients on coroots."""
        return self.A_inv

    # -- ν(β) -------------------------------------------------------------
    def nu_min_decomposition(self, beta) -> int:
        """Minimal number of positive roots summing to ``β`` (dynamic programming)."""
        beta = tuple(int(x) for x in beta)
        if any(x < 0 for x in beta) or len(beta) != self.rank:
            raise MathDomainError(f"{beta} is not in Q_+")
        return self._nu_table(beta)

    def _nu_table(self, beta) -> int:
        ranges = [range(b + 1) for b in beta]
        best: dict[tuple[int, ...], int] = {}
        inf = float("inf")
        for gamma in itertools.product(*ranges):
            if not any(gamma):
                best[gamma] = 0
                continue
            val = inf
            for alpha in self.positive_roots:
                prev = tuple(g - a for g, a in zip(gamma, alpha))
                if min(prev) < 0:
                    continue
                val = min(val, best[prev] + 1)
            best[gamma] = val
        return int(best[beta])

    # -- q-coupling matrix ------------------------------------------------
    def q_coupling_matrix(self) -> list[list[LaurentPoly]]:
        """``c(q) = [ℓ]_q ([d_i a_ij]_q)^{-1}`` as Laurent polynomials."""
        n = self.rank
        Q = [[LaurentPoly.qnum(self.B[i][j]) for j in range(n)] for i in range(n)]
        det = laurent_det(Q)
        ell_q = LaurentPoly.qnum(self.ell)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [[Q[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                cof = laurent_det(minor) if minor else LaurentPoly.const(1)
                if (i + j) % 2:
                    cof = -cof
                try:
                    row.append((ell_q * cof).exact_div(det))
                except MathDomainError:
                    raise MathDomainError(
                        "c_ij(q) is not a Laurent polynomial; check ℓ and the Cartan data"
                    ) from None
            out.append(row)
        return out

    def coupling_terms(self) -> list[tuple[int, int, int, int]]:
        """Nonzero ``(i, j, r, c_ij^(r))``."""
        c = self.q_coupling_matrix()
        out = []
        for i in range(self.rank):
            for j in range(self.rank):
                for r, v in c[i][j].items():
                    out.append((i, j, r, int(v)))
        return out


def _frac_inverse(M) -> tuple[tuple[Fraction, ...], ...]:
    n = len(M)
    a = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


# ---------------------------------------------------------------------------
# Zero-mode realization


def _E(n: int, i: int, j: int) -> np.ndarray:
    m = linalg.zeros((n, n), EXACT)
    m[i, j] = QI(1)
    return m


def _defining_chevalley(cd: CartanData) -> tuple[list, list, list]:
    """``(e_i, f_i, h_i)`` in a faithful representation with ``[e_i, f_i] = h_i``."""
    key = cd.name
    if key in ("A1", "A2") or (key is None and cd.rank == 1):
        n = cd.rank + 1
        e = [_E(n, i, i + 1) for i in range(cd.rank)]
        f = [_E(n, i + 1, i) for i in range(cd.rank)]
        h = [_E(n, i, i) - _E(n, i + 1, i + 1) for i in range(cd.rank)]
        return e, f, h
    if key in ("B2", "C2"):
        # sp(4) preserving the form with blocks [[0, I], [-I, 0]]
        e_short = _E(4, 0, 1) - _E(4, 3, 2)
        e_long = _E(4, 1, 3)
        f_short, f_long = e_short.T.copy(), e_long.T.copy()
        h_short, h_long = linalg.commutator(e_short, f_short), linalg.commutator(e_long, f_long)
        if key == "C2":
            return [e_short, e_long], [f_short, f_long], [h_short, h_long]
        return [e_long, e_short], [f_long, f_short], [h_long, h_short]
    raise SchemaError("zero-mode realization is only available for rank 1 and built-in types")


@dataclass
class RootVector:
    """A root vector ``x^±_β`` given as a scaled iterated bracket of simple ones."""

    beta: tuple[int, ...]
    word: tuple[int, ...]
    scale_plus: QI
    scale_minus: QI


def _bracket_word(mats: list[np.ndarray], word: tuple[int, ...]) -> np.ndarray:
    acc = mats[word[-1]]
    for i in reversed(word[:-1]):
        acc = linalg.commutator(mats[i], acc)
    return acc


@dataclass
class ZeroModeRealization:
    """Matrices of ``x^±_{i,0}``, ``h_i``, ``ξ_{i,0}`` and normalised root vectors."""

    cartan: CartanData
    dim: int
    xp: list[np.ndarray]
    xm: list[np.ndarray]
    h: list[np.ndarray]
    xi: list[np.ndarray]
    kappa: QI
    roots: list[RootVector] = field(default_factory=list)

    @classmethod
    def build(cls, cd: CartanData) -> "ZeroModeRealization":
        e, f, h = _defining_chevalley(cd)
        xp = [e[i] * cd.d[i] for i in range(cd.rank)]
        xm = [f[i] for i in range(cd.rank)]
        xi = [h[i] * cd.d[i] for i in range(cd.rank)]
        tr = sum((x for x in np.diag(linalg.matmul(h[0], h[0]))), QI(0))
        kappa = QI(Fraction(2, cd.d[0])) / tr
        z = cls(cd, e[0].shape[0], xp, xm, h, xi, kappa)
        z.roots = z._root_vectors()
        return z

    def form(self, X: np.ndarray, Y: np.ndarray) -> QI:
        """Invariant form ``κ tr(XY)`` normalised by ``(α, α) = 2`` on short roots."""
        P = linalg.matmul(X, Y)
        return sum((P[k, k] for k in range(P.shape[0])), QI(0)) * self.kappa

    def _root_vectors(self) -> list[RootVector]:
        cd = self.cartan
        words: dict[tuple[int, ...], tuple[int, ...]] = {}
        out = []
        for beta in cd.positive_roots:
            if sum(beta) == 1:
                word = (beta.index(1),)
            else:
                word = None
                for i in range(cd.rank):
                    gamma = tuple(b - (j == i) for j, b in enumerate(beta))
                    if gamma in words:
                        cand = (i,) + words[gamma]
                        if not linalg.is_zero(_bracket_word(self.xp, cand)):
                            word = cand
                            break
                if word is None:
                    raise MathDomainError(f"no bracket word found for root {beta}")
            words[beta] = word
            xp = _bracket_word(self.xp, word)
            xm = _bracket_word(self.xm, word)
            pairing = self.form(xm, xp)
            if not pairing:
                raise MathDomainError(f"degenerate pairing for root {beta}")
            out.append(RootVector(beta, word, QI(1), pairing.inverse()))
        return out

    def root_matrices(self, beta) -> tuple[np.ndarray, np.ndarray]:
        rv = next(r for r in self.roots if r.beta == tuple(beta))
        return (_bracket_word(self.xm, rv.word) * rv.scale_minus,
                _bracket_word(self.xp, rv.word) * rv.scale_plus)


def root_vectors_in(roots: list[RootVector], xp: list[np.ndarray], xm: list[np.ndarray]):
    """Apply the realization's bracket words and scalars to another representation."""
    exact = linalg.is_exact_array(xp[0])
    out = []
    for rv in roots:
        sm, sp = (rv.scale_minus, rv.scale_plus) if exact else (complex(rv.scale_minus), complex(rv.scale_plus))
        out.append((rv.beta, _bracket_word(xm, rv.word) * sm, _bracket_word(xp, rv.word) * sp))
    return out


def r_tensor(roots, xp1, xm1, xp2, xm2) -> np.ndarray:
    """``𝔯 = sum_β x^-_β ⊗ x^+_β`` on ``V1 ⊗ V2``."""
    v1 = root_vectors_in(roots, xp1, xm1)
    v2 = root_vectors_in(roots, xp2, xm2)
    n = xp1[0].shape[0] * xp2[0].shape[0]
    out = linalg.zeros((n, n), EXACT)
    for (beta, xm_a, _), (_, _, xp_b) in zip(v1, v2):
        out = out + linalg.kron(xm_a, xp_b)
    return out


def r_tensor_h(cd: CartanData, roots, xp1, xm1, xp2, xm2, h_values) -> np.ndarray:
    """``𝔯(h) = -sum_β β(h) x^-_β ⊗ x^+_β`` with ``α_i(h) = h_values[i]``."""
    v1 = root_vectors_in(roots, xp1, xm1)
    v2 = root_vectors_in(roots, xp2, xm2)
    n = xp1[0].shape[0] * xp2[0].shape[0]
    out = linalg.zeros((n, n), EXACT)
    for (beta, xm_a, _), (_, _, xp_b) in zip(v1, v2):
        bh = sum(QI.coerce(Fraction(b)) * h_values[i] for i, b in enumerate(beta))
        out = out - linalg.kron(xm_a, xp_b) * bh
    return out


def omega_h(cd: CartanData, xi1: list[np.ndarray], xi2: list[np.ndarray]) -> np.ndarray:
    """``Ω_𝔥 = sum_ij (B^-1)_ij ξ_i ⊗ ξ_j``."""
    n = xi1[0].shape[0] * xi2[0].shape[0]
    out = linalg.zeros((n, n), EXACT)
    for i in range(cd.rank):
        for j in range(cd.rank):
            c = cd.B_inv[i][j]
            if c:
                out = out + linalg.kron(xi1[i], xi2[j]) * QI(c)
    return out


def casimir_tensors(z: ZeroModeRealization) -> dict[str, np.ndarray]:
    """``Ω_g``, ``Ω_𝔥``, ``𝔯`` and ``𝔯^{21}`` on the realization squared."""
    n = z.dim
    r = r_tensor(z.roots, z.xp, z.xm, z.xp, z.xm)
    P = linalg.flip_matrix(n, n)
    r21 = linalg.matmul(linalg.matmul(P, r), P)
    oh = omega_h(z.cartan, z.xi, z.xi)
    return {"omega_g": oh + r + r21, "omega_h": oh, "r": r, "r21": r21}
