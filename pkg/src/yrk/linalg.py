"""Dense linear algebra on exact (object dtype) and complex numpy arrays."""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError, MathDomainError
from .poly import Poly, exact_roots
from .scalars import EXACT, FLOAT, QI, ONE, ZERO


def is_exact_array(a: np.ndarray) -> bool:
    return a.dtype == object


def backend_of_array(a: np.ndarray) -> str:
    return EXACT if a.dtype == object else FLOAT


def zeros(shape, backend: str = EXACT) -> np.ndarray:
    if backend == EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def eye(n: int, backend: str = EXACT) -> np.ndarray:
    out = zeros((n, n), backend)
    for k in range(n):
        out[k, k] = ONE if backend == EXACT else 1.0
    return out


def exact_array(rows) -> np.ndarray:
    """Object array of :class:`QI` from nested lists of exact scalars."""
    a = np.array(rows, dtype=object)
    flat = a.reshape(-1)
    for k in range(flat.size):
        flat[k] = QI.coerce(flat[k])
    return a


def to_backend(a: np.ndarray, backend: str) -> np.ndarray:
    if backend == EXACT:
        if a.dtype == object:
            return a
        raise MathDomainError("cannot convert a float array to the exact backend")
    if a.dtype == object:
        return np.array([[complex(x) for x in row] for row in a], dtype=complex).reshape(a.shape)
    return a.astype(complex)


def to_complex(a: np.ndarray) -> np.ndarray:
    return to_backend(a, FLOAT)


def is_zero(a: np.ndarray, tol: float = 0.0) -> bool:
    if a.dtype == object:
        return not any(bool(x) for x in a.flat)
    return bool(np.max(np.abs(a), initial=0.0) <= tol)


def max_abs(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(to_complex(a))))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        return np.kron(a, b)
    n1, m1 = a.shape
    n2, m2 = b.shape
    out = zeros((n1 * n2, m1 * m2), EXACT)
    for i in range(n1):
        for j in range(m1):
            x = a[i, j]
            if not x:
                continue
            out[i * n2:(i + 1) * n2, j * m2:(j + 1) * m2] = b * x
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object:
        return a @ b
    n, k = a.shape
    k2, m = b.shape
    out = zeros((n, m), EXACT)
    for i in range(n):
        row = a[i]
        nz = [t for t in range(k) if row[t]]
        if not nz:
            continue
        for j in range(m):
            acc = ZERO
            for t in nz:
                y = b[t, j]
                if y:
                    acc = acc + row[t] * y
            out[i, j] = acc
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return matmul(a, b) - matmul(b, a)


def flip_matrix(d1: int, d2: int, backend: str = EXACT) -> np.ndarray:
    """Permutation ``P`` with ``P (v ⊗ w) = w ⊗ v`` for ``v`` in dim ``d1``."""
    P = zeros((d1 * d2, d1 * d2), backend)
    one = ONE if backend == EXACT else 1.0
    for i in range(d1):
        for j in range(d2):
            P[j * d1 + i, i * d2 + j] = one
    return P


def embed(op: np.ndarray, pair: tuple[int, int], dims: tuple[int, int, int]) -> np.ndarray:
    """Place a two-site operator on factors ``pair`` of a triple tensor product."""
    backend = backend_of_array(op)
    d1, d2, d3 = dims
    if pair == (0, 1):
        return kron(op, eye(d3, backend))
    if pair == (1, 2):
        return kron(eye(d1, backend), op)
    if pair == (0, 2):
        # conjugate op⊗1 on V1⊗V3⊗V2 by the swap of the last two factors
        big = kron(op, eye(d2, backend))
        swap = kron(eye(d1, backend), flip_matrix(d3, d2, backend))
        return matmul(matmul(swap.T, big), swap)
    raise ValueError(f"unsupported factor pair {pair}")


# -- exact elimination ------------------------------------------------------

def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q(i) and the pivot columns."""
    m = a.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if m[i, c]), None)
        if p is None:
            continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        inv = m[r, c].inverse()
        m[r] = m[r] * inv
        for i in range(rows):
            if i != r and m[i, c]:
                f = m[i, c]
                m[i] = m[i] - m[r] * f
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, tol: float = 1e-10) -> int:
    if a.size == 0:
        return 0
    if a.dtype != object:
        return int(np.linalg.matrix_rank(a, tol=tol * max(1.0, max_abs(a))))
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> np.ndarray:
    """Exact basis of the right null space, as columns."""
    rows, cols = a.shape
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((cols, len(free)), EXACT)
    for k, f in enumerate(free):
        basis[f, k] = ONE
        for r, p in enumerate(pivots):
            basis[p, k] = -m[r, f]
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object:
        return np.linalg.solve(a, b)
    n = a.shape[0]
    aug = np.concatenate([a, b], axis=1)
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystemError("singular matrix in exact solve")
    return m[:, n:]


def inv(a: np.ndarray) -> np.ndarray:
    return solve(a, eye(a.shape[0], backend_of_array(a)))


def det(a: np.ndarray):
    if a.dtype != object:
        return np.linalg.det(a)
    m = a.copy()
    n = m.shape[0]
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i, c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[[c, p]] = m[[p, c]]
            d = -d
        d = d * m[c, c]
        inv_p = m[c, c].inverse()
        for i in range(c + 1, n):
            if m[i, c]:
                m[i] = m[i] - m[c] * (m[i, c] * inv_p)
    return d


def charpoly(a: np.ndarray) -> Poly:
    """Characteristic polynomial ``det(x - a)`` by Faddeev–LeVerrier."""
    n = a.shape[0]
    backend = backend_of_array(a)
    coeffs = [None] * (n + 1)
    coeffs[n] = ONE if backend == EXACT else 1.0
    M = zeros((n, n), backend)
    ident = eye(n, backend)
    for k in range(1, n + 1):
        M = matmul(a, M) + ident * coeffs[n - k + 1]
        AM = matmul(a, M)
        tr = sum((AM[i, i] for i in range(n)), ZERO if backend == EXACT else 0j)
        coeffs[n - k] = -tr / k
    return Poly(coeffs, backend)


def eigen_projectors(a: np.ndarray) -> list[tuple[object, np.ndarray]]:
    """Exact spectral decomposition of a diagonalisable matrix.

    Returns ``[(eigenvalue, projector), ...]``; raises
    :class:`MathDomainError` if ``a`` is not diagonalisable.
    """
    n = a.shape[0]
    if n == 0:
        return []
    if not is_exact_array(a):
        return _eigen_projectors_float(a)
    evs = [lam for lam, _ in exact_roots(charpoly(a))]
    ident = eye(n, EXACT)
    out = []
    for k, lam in enumerate(evs):
        P = ident
        for j, mu in enumerate(evs):
            if j != k:
                P = matmul(P, (a - ident * mu)) * (lam - mu).inverse()
        out.append((lam, P))
    total = sum((P for _, P in out), zeros((n, n), EXACT))
    if not is_zero(total - ident):
        raise MathDomainError("matrix is not diagonalisable")
    for lam, P in out:
        if not is_zero(matmul(a, P) - P * lam):
            raise MathDomainError("matrix is not diagonalisable")
    return out


def _eigen_projectors_float(a: np.ndarray, tol: float = 1e-8) -> list[tuple[complex, np.ndarray]]:
    w, v = np.linalg.eig(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    groups: list[list[int]] = []
    for k, lam in enumerate(w):
        for g in groups:
            if abs(w[g[0]] - lam) < tol * scale:
                g.append(k)
                break
        else:
            groups.append([k])
    if np.linalg.cond(v) > 1e10:
        raise MathDomainError("matrix is not diagonalisable")
    vinv = np.linalg.inv(v)
    return [(complex(np.mean(w[g])), v[:, g] @ vinv[g, :]) for g in groups]


def column_basis(P: np.ndarray) -> np.ndarray:
    """Basis for the column space of ``P`` (exact rref, or SVD for floats)."""
    if not is_exact_array(P):
        u, sv, _ = np.linalg.svd(P)
        r = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
        return u[:, :r]
    _, piv = rref(P)
    return P[:, piv]
