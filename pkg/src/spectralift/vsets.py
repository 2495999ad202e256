"""Symmetric vector-level sets as finite unions of polyhedral pieces.

Used as the Q in distance/projection transfer and in the projection/
prox-regularity probes.  A piece is an HPolyhedron (a single point is the
degenerate all-equalities case); the union need not be convex, which is what
makes the prox-regularity probes interesting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .exactlinalg import Vec
from .polyhedra import HPolyhedron
from .rationals import norm2_sq, parse_vector, vec_sub
from .symmetry import enumerate_permutations, enumerate_signed_permutations

ZERO = Fraction(0)


def point_piece(p: Sequence) -> HPolyhedron:
    p = parse_vector(p)
    n = len(p)
    eqs = tuple((tuple(Fraction(int(i == k)) for i in range(n)), p[k])
                for k in range(n))
    return HPolyhedron(eqs, (), n)


@dataclass(frozen=True)
class VectorSet:
    pieces: tuple[HPolyhedron, ...]
    name: str = ""
    symmetry: str = "permutation"  # declared invariance: permutation|signed|none

    @classmethod
    def create(cls, pieces: Sequence[HPolyhedron], *, name: str = "",
               symmetry: str = "permutation",
               close_under_symmetry: bool = False) -> "VectorSet":
        if not pieces:
            raise InputError("a vector set needs at least one piece")
        n = pieces[0].dim_ambient
        if any(p.dim_ambient != n for p in pieces):
            raise InputError("pieces of mixed dimension")
        if close_under_symmetry and symmetry != "none":
            group = (list(enumerate_permutations(n)) if symmetry == "permutation"
                     else list(enumerate_signed_permutations(n)))
            expanded = set()
            for piece in pieces:
                for sigma in group:
                    inv = sigma.inverse()
                    eqs = tuple(sorted((inv.apply(c), d) for c, d in piece.eqs))
                    ineqs = tuple(sorted((inv.apply(c), d)
                                         for c, d in piece.ineqs))
                    expanded.add(HPolyhedron(eqs, ineqs, n))
            pieces = sorted(expanded, key=lambda h: (h.eqs, h.ineqs))
        return cls(tuple(pieces), name, symmetry)

    @property
    def n(self) -> int:
        return self.pieces[0].dim_ambient

    def contains(self, v: Sequence) -> bool:
        v = parse_vector(v)
        return any(p.contains(v) for p in self.pieces)

    def projection_candidates(self, z: Sequence) -> list[tuple[Fraction, Vec]]:
        """Exact nearest point per piece: (squared distance, point), sorted."""
        z = parse_vector(z)
        cands = []
        for piece in self.pieces:
            y = piece.project(z)
            cands.append((norm2_sq(vec_sub(z, y)), y))
        cands.sort()
        return cands

    def distance(self, z: Sequence) -> float:
        d2 = self.projection_candidates(z)[0][0]
        return float(d2) ** 0.5

    def distance_sq(self, z: Sequence) -> Fraction:
        return self.projection_candidates(z)[0][0]

    def near_minimizers(self, z: Sequence, slack: float) -> list[Vec]:
        """All piece-projections within `slack` of the optimal distance."""
        cands = self.projection_candidates(z)
        dmin = float(cands[0][0]) ** 0.5
        out: list[Vec] = []
        for d2, y in cands:
            if float(d2) ** 0.5 <= dmin + slack and y not in out:
                out.append(y)
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "symmetry": self.symmetry,
                "pieces": [p.to_json() for p in self.pieces]}
