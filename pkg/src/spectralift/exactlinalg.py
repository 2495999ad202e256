"""Dense exact linear algebra over Fractions: rref, solves, affine projection.

Everything here is O(n^3) Gaussian elimination on tiny matrices; exactness
matters, speed does not.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Basis of {x : rows @ x = 0}."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
                 ) -> Vec | None:
    """One solution of rows @ x = rhs, or None if inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:  # pivot in the rhs column: inconsistent
            return None
        x[pc] = red[r][-1]
    return tuple(x)


def solve_square(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec | None:
    """Solve a @ x = b for square nonsingular a (None if singular/inconsistent)."""
    return solve_linear(a, b)


def matvec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vec:
    return tuple(sum((r[j] * x[j] for j in range(len(x))), ZERO) for r in a)


def independent_subset(vectors: Sequence[Vec]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedily in order."""
    chosen: list[int] = []
    rows: list[Vec] = []
    for i, v in enumerate(vectors):
        if any(x != 0 for x in v) and rank(rows + [v]) > len(chosen):
            chosen.append(i)
            rows.append(v)
    return chosen


def project_affine(z: Vec, eq_rows: Sequence[Vec], eq_rhs: Sequence[Fraction]
                   ) -> Vec | None:
    """Exact Euclidean projection of z onto {x : eq_rows @ x = eq_rhs}.

    Returns None when the affine set is empty.
    """
    n = len(z)
    if not eq_rows:
        return z
    y0 = solve_linear(eq_rows, eq_rhs)
    if y0 is None:
        return None
    basis = nullspace(eq_rows, n)
    if not basis:
        return y0
    # minimize ||z - y0 - N w||^2: normal equations (N^T N) w = N^T (z - y0)
    d = tuple(z[i] - y0[i] for i in range(n))
    k = len(basis)
    gram = [[sum((basis[i][t] * basis[j][t] for t in range(n)), ZERO)
             for j in range(k)] for i in range(k)]
    rhs = [sum((basis[i][t] * d[t] for t in range(n)), ZERO) for i in range(k)]
    w = solve_linear(gram, rhs)
    assert w is not None  # Gram matrix of independent vectors is nonsingular
    return tuple(y0[i] + sum((w[j] * basis[j][i] for j in range(k)), ZERO)
                 for i in range(n))


def same_span(basis_a: Sequence[Vec], basis_b: Sequence[Vec]) -> bool:
    """Do two sets of vectors span the same subspace?"""
    ra = rank(basis_a) if basis_a else 0
    rb = rank(basis_b) if basis_b else 0
    if ra != rb:
        return False
    both = list(basis_a) + list(basis_b)
    return rank(both) == ra


def in_span(v: Vec, basis: Sequence[Vec]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(basis)


def orthogonal_complement_basis(basis: Sequence[Vec], n: int) -> list[Vec]:
    """Basis of the orthogonal complement of span(basis) in R^n."""
    if not basis:
        return [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    return nullspace(basis, n)
