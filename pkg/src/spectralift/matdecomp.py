"""Dense symmetric eigendecomposition, SVD, and orthogonal conjugation.

Conventions (used by every module downstream):
  * eigendecomposition   X = U^T Diag(lam) U   with lam nonincreasing,
  * singular value form  A = U^T Diag(sigma) V with sigma >= 0 nonincreasing,
so the ROWS of U (and V) are the eigenvectors / singular vectors.

The eigensolver is a cyclic Jacobi iteration: every sweep visits all index
pairs once, in the fixed round-robin tournament order; pairs in one round are
disjoint, so their rotations commute and are applied as a single orthogonal
factor.  Termination: off-diagonal Frobenius mass <= 1e-14 * ||X||_F, or 30
sweeps.  No randomization anywhere, so results are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError

EIG_OFFDIAG_REL_TOL = 1e-14
MAX_SWEEPS = 30
SYMMETRY_REL_TOL = 1e-12
ORTH_TOL = 1e-10
SVD_CLAMP_TOL = 1e-12


def default_grouping_tol(fro_norm: float) -> float:
    """Relative tolerance at which nearly equal spectral values are tied."""
    return 1e-8 * (1.0 + fro_norm)


def _as_matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2:
        raise InputError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    return m


@dataclass(frozen=True)
class SymMatrix:
    entries: np.ndarray

    def __init__(self, entries):
        m = _as_matrix(entries)
        if m.shape[0] != m.shape[1]:
            raise InputError(f"not square: shape {m.shape}")
        scale = 1.0 + (np.max(np.abs(m)) if m.size else 0.0)
        if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_REL_TOL * scale:
            raise InputError("matrix is not symmetric within tolerance")
        object.__setattr__(self, "entries", (m + m.T) / 2.0)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.entries, "fro"))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)


@dataclass(frozen=True)
class OrthMatrix:
    entries: np.ndarray

    def __init__(self, entries):
        m = _as_matrix(entries)
        if m.shape[0] != m.shape[1]:
            raise InputError(f"not square: shape {m.shape}")
        defect = np.max(np.abs(m.T @ m - np.eye(m.shape[0]))) if m.size else 0.0
        if defect > ORTH_TOL:
            raise InputError(f"orthogonality defect {defect:g} exceeds {ORTH_TOL:g}")
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)


@dataclass(frozen=True)
class EigenPair:
    U: OrthMatrix
    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if np.any(lam[:-1] < lam[1:]):
            raise InputError("eigenvalues are not sorted nonincreasingly")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return len(self.lam)

    def reconstruct(self) -> SymMatrix:
        u = self.U.entries
        return SymMatrix(u.T @ np.diag(self.lam) @ u)

    def residual(self, x: SymMatrix) -> float:
        return float(np.linalg.norm(x.entries - self.reconstruct().entries, "fro"))


@dataclass(frozen=True)
class SVDTriple:
    U: OrthMatrix
    V: OrthMatrix
    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if np.any(s < 0):
            raise InputError("negative singular value")
        if np.any(s[:-1] < s[1:]):
            raise InputError("singular values not sorted nonincreasingly")
        object.__setattr__(self, "sigma", s)

    def reconstruct(self) -> np.ndarray:
        n, m = self.U.n, self.V.n
        d = np.zeros((n, m))
        d[: len(self.sigma), : len(self.sigma)] = np.diag(self.sigma)
        return self.U.entries.T @ d @ self.V.entries


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    # tournament schedule: n-1 rounds of disjoint pairs covering all pairs
    m = n if n % 2 == 0 else n + 1
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = tuple(
            (min(players[i], players[m - 1 - i]), max(players[i], players[m - 1 - i]))
            for i in range(m // 2)
            if players[i] < n and players[m - 1 - i] < n
        )
        rounds.append(pairs)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(a: np.ndarray) -> float:
    od = a.copy()
    np.fill_diagonal(od, 0.0)
    return float(np.sqrt((od * od).sum()))


def eig_sym(x: SymMatrix | np.ndarray) -> EigenPair:
    """Cyclic Jacobi eigendecomposition, X = U^T Diag(lam) U."""
    if not isinstance(x, SymMatrix):
        x = SymMatrix(x)
    a = x.entries.copy()
    n = x.n
    v = np.eye(n)
    if n == 1:
        return EigenPair(OrthMatrix(v), np.diag(a).copy())
    target = EIG_OFFDIAG_REL_TOL * x.fro_norm()
    skip = target / n
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(a) <= target:
            break
        for pairs in _round_robin(n):
            ps = np.fromiter((p for p, _ in pairs), dtype=int)
            qs = np.fromiter((q for _, q in pairs), dtype=int)
            apq = a[ps, qs]
            mask = np.abs(apq) > skip
            if not mask.any():
                continue
            ps, qs, apq = ps[mask], qs[mask], apq[mask]
            theta = 0.5 * (a[qs, qs] - a[ps, ps]) / apq
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(1.0 + theta * theta))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            q = np.eye(n)
            q[ps, ps] = c
            q[qs, qs] = c
            q[ps, qs] = s
            q[qs, ps] = -s
            a = q.T @ a @ q
            v = v @ q
            a[ps, qs] = 0.0
            a[qs, ps] = 0.0
    lam = np.diag(a).copy()
    order = np.argsort(-lam, kind="stable")
    # rows of U are eigenvectors: U = (V with sorted columns)^T
    return EigenPair(OrthMatrix(v[:, order].T), lam[order])


def conjugate_by(u: OrthMatrix, x: SymMatrix) -> SymMatrix:
    """The group action U.X = U^T X U."""
    if u.n != x.n:
        raise InputError(f"dimension mismatch: U is {u.n}x{u.n}, X is {x.n}x{x.n}")
    return SymMatrix(u.entries.T @ x.entries @ u.entries)


def diag_embed(values) -> SymMatrix:
    v = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise InputError("non-finite entries")
    return SymMatrix(np.diag(v))


def _complete_orthonormal(cols: list[np.ndarray], n: int) -> list[np.ndarray]:
    """Extend a list of orthonormal n-vectors to a full basis (Gram-Schmidt
    against the standard basis, deterministic)."""
    basis = list(cols)
    for j in range(n):
        if len(basis) == n:
            break
        w = np.zeros(n)
        w[j] = 1.0
        for b in basis:
            w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 0.5:
            basis.append(w / nw)
    # second pass for stubborn geometries
    j = 0
    while len(basis) < n:
        w = np.zeros(n)
        w[j % n] = 1.0
        w[(j + 1) % n] = 0.5
        for b in basis:
            w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-6:
            basis.append(w / nw)
        j += 1
    return basis


def svd(a) -> SVDTriple:
    """One-sided Jacobi SVD of an n x m matrix (n >= m), A = U^T Diag(sigma) V.

    Columns of A are rotated until mutually orthogonal; callers with n < m
    pass the transpose (the CLI documents that convention).
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n < m:
        raise InputError(f"svd expects n >= m, got {n}x{m}; transpose first")
    b = a.copy()
    w = np.eye(m)
    scale = float(np.linalg.norm(a, "fro"))
    tol = 1e-15 * (1.0 + scale)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for pairs in _round_robin(m):
            for p, q in pairs:
                bp, bq = b[:, p], b[:, q]
                gamma = float(bp @ bq)
                alpha = float(bp @ bp)
                beta = float(bq @ bq)
                if abs(gamma) <= tol * max(1.0, np.sqrt(alpha * beta)):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.sign(zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                if zeta == 0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                b[:, p], b[:, q] = c * bp - s * bq, s * bp + c * bq
                wp, wq = w[:, p].copy(), w[:, q].copy()
                w[:, p], w[:, q] = c * wp - s * wq, s * wp + c * wq
        if not rotated:
            break
    norms = np.linalg.norm(b, axis=0)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    sigma = np.where(sigma < 0, 0.0, sigma)
    if np.any(sigma < -SVD_CLAMP_TOL):
        raise InputError("negative singular value beyond clamping tolerance")
    b = b[:, order]
    w = w[:, order]
    ucols = [b[:, i] / sigma[i] for i in range(m) if sigma[i] > tol]
    ufull = _complete_orthonormal(ucols, n)
    u = np.stack(ufull, axis=0)  # rows are left singular vectors
    return SVDTriple(OrthMatrix(u), OrthMatrix(w.T), sigma)


def random_orthogonal(n: int, rng: np.random.Generator) -> OrthMatrix:
    """Haar-ish random orthogonal matrix (QR with positive diagonal fix)."""
    if n == 1:
        return OrthMatrix(np.array([[1.0 if rng.random() < 0.5 else -1.0]]))
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return OrthMatrix(q)


def stabilizer_sample(e: EigenPair, grouping_tol: float, seed: int) -> OrthMatrix:
    """Sample W.U where W is block-orthogonal over the tie-blocks of e.lam.

    Conjugating Diag(grouped lam) by the result reproduces the original
    matrix up to the grouping perturbation; singleton blocks only receive a
    random sign.
    """
    if grouping_tol <= 0:
        raise InputError("grouping_tol must be positive")
    rng = np.random.default_rng(seed)
    n = e.n
    w = np.zeros((n, n))
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(e.lam[j] - e.lam[j - 1]) <= grouping_tol:
            j += 1
        k = j - i
        if k == 1:
            w[i, i] = 1.0 if rng.random() < 0.5 else -1.0
        else:
            w[i:j, i:j] = random_orthogonal(k, rng).entries
        i = j
    return OrthMatrix(w @ e.U.entries)


def grouped_spectrum(lam: np.ndarray, grouping_tol: float) -> np.ndarray:
    """Replace each tie-block of a sorted spectrum by its mean."""
    out = np.asarray(lam, dtype=float).copy()
    i = 0
    while i < len(out):
        j = i + 1
        while j < len(out) and abs(out[j] - out[j - 1]) <= grouping_tol:
            j += 1
        out[i:j] = out[i:j].mean()
        i = j
    return out
