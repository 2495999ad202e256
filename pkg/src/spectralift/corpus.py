"""Shipped corpus: the polyhedral functions, vector sets and demo oracles the
test and verification suites run on."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .lift import SpectralFn
from .polyfun import MaxAffineFn
from .polyhedra import HPolyhedron
from .vsets import VectorSet, point_piece

ZERO = Fraction(0)
ONE = Fraction(1)


def ell1(n: int) -> MaxAffineFn:
    """l1 norm as a max of the 2^n sign-vector pieces (permutation mode, so
    it can serve as the base of an eigenvalue lift)."""
    pieces = [(list(map(Fraction, s)), ZERO)
              for s in itertools.product((1, -1), repeat=n)]
    return MaxAffineFn.create(pieces, symmetry_mode="permutation",
                              name=f"ell1_{n}")


def ell1_signed(n: int) -> MaxAffineFn:
    """l1 norm in signed mode (base for the nuclear norm lift)."""
    return MaxAffineFn.create([([ONE] * n, ZERO)], symmetry_mode="signed",
                              name=f"ell1s_{n}")


def f_max(n: int) -> MaxAffineFn:
    e1 = [ONE] + [ZERO] * (n - 1)
    return MaxAffineFn.create([(e1, ZERO)], symmetry_mode="permutation",
                              name=f"max_{n}")


def neg_orthant_indicator(n: int) -> MaxAffineFn:
    e1 = [ONE] + [ZERO] * (n - 1)
    return MaxAffineFn.create([([ZERO] * n, ZERO)], [(e1, ZERO)],
                              symmetry_mode="permutation",
                              name=f"delta_negorthant_{n}")


def box_indicator(n: int) -> MaxAffineFn:
    e1 = [ONE] + [ZERO] * (n - 1)
    return MaxAffineFn.create([([ZERO] * n, ZERO)], [(e1, ONE)],
                              symmetry_mode="signed",
                              name=f"delta_box_{n}")


def linf_norm(n: int) -> MaxAffineFn:
    e1 = [ONE] + [ZERO] * (n - 1)
    return MaxAffineFn.create([(e1, ZERO)], symmetry_mode="signed",
                              name=f"linf_{n}")


def shipped_functions(n: int) -> list[MaxAffineFn]:
    return [ell1(n), f_max(n), neg_orthant_indicator(n)]


# -- vector sets ----------------------------------------------------------------


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(ONE if j == i else ZERO for j in range(n))


def neg_orthant_set(n: int) -> VectorSet:
    piece = HPolyhedron((), tuple((_unit(n, i), ZERO) for i in range(n)), n)
    return VectorSet((piece,), name=f"R{n}_neg", symmetry="permutation")


def box_set(n: int, radius=ONE) -> VectorSet:
    r = Fraction(radius)
    ineqs = []
    for i in range(n):
        ineqs.append((_unit(n, i), r))
        ineqs.append((tuple(-x for x in _unit(n, i)), r))
    piece = HPolyhedron((), tuple(ineqs), n)
    return VectorSet((piece,), name=f"box{n}", symmetry="signed")


def sym_halfspace_set(n: int, rhs=ONE) -> VectorSet:
    """The permutation-symmetric half-space {x : x_1 + ... + x_n <= rhs}."""
    piece = HPolyhedron((), (((ONE,) * n, Fraction(rhs)),), n)
    return VectorSet((piece,), name=f"halfspace{n}", symmetry="permutation")


def two_point_set() -> VectorSet:
    return VectorSet((point_piece([-1]), point_piece([1])),
                     name="two_points", symmetry="signed")


def polygon_point_set(k: int) -> VectorSet:
    """k rational-ish points near the unit circle (dyadic approximations), a
    finite stand-in for the sphere: every point is equidistant from 0."""
    pieces = []
    for j in range(k):
        ang = 2 * np.pi * j / k
        pieces.append(point_piece([Fraction(float(np.cos(ang))),
                                   Fraction(float(np.sin(ang)))]))
    return VectorSet(tuple(pieces), name=f"polygon{k}", symmetry="none")


def axis_line_set(n: int, axis: int = 0) -> VectorSet:
    eqs = tuple((_unit(n, i), ZERO) for i in range(n) if i != axis)
    return VectorSet((HPolyhedron(eqs, (), n),), name=f"axis{axis}_line{n}",
                     symmetry="none")


def rank_at_most_set(m: int, k: int) -> VectorSet:
    """{sigma : at most k nonzero entries} as a signed-symmetric union of
    coordinate subspaces."""
    pieces = []
    for support in itertools.combinations(range(m), k):
        eqs = tuple((_unit(m, i), ZERO) for i in range(m)
                    if i not in support)
        pieces.append(HPolyhedron(eqs, (), m))
    return VectorSet(tuple(pieces), name=f"rank_le_{k}_of_{m}",
                     symmetry="signed")


def shipped_sets(n: int) -> list[VectorSet]:
    return [neg_orthant_set(n), box_set(n), sym_halfspace_set(n)]


# -- spectral functions -----------------------------------------------------------


def sum_abs_eigenvalues(n: int) -> SpectralFn:
    return SpectralFn(ell1(n))


def top_eigenvalue(n: int) -> SpectralFn:
    return SpectralFn(f_max(n))


def nsd_indicator(n: int) -> SpectralFn:
    return SpectralFn(neg_orthant_indicator(n))


def nuclear_norm(m: int) -> SpectralFn:
    return SpectralFn(ell1_signed(m), kind="singular")


def shipped_spectral(n: int) -> list[SpectralFn]:
    return [top_eigenvalue(n), sum_abs_eigenvalues(n), nsd_indicator(n)]


# -- demo oracles (nonpolyhedral) ---------------------------------------------


def quartic_quarter(x) -> float:
    """f(x) = (1/4) sum x_i^4; its conjugate is (3/4) sum |y_i|^{4/3}."""
    xa = np.asarray(x, dtype=float)
    return float(0.25 * np.sum(xa**4))


def quartic_conjugate_exact(y) -> float:
    ya = np.asarray(y, dtype=float)
    return float(0.75 * np.sum(np.abs(ya) ** (4.0 / 3.0)))
