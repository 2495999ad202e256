"""Exact polyhedral geometry: V-representations, double description, cones,
relative interiors, and Euclidean projection onto polyhedral pieces.

A GenPolyhedron is conv(points) + cone(rays); lineality is carried as
opposite ray pairs.  Canonical form removes redundant generators by exact LP,
but semantic equality is always decided by mutual containment, never by
comparing generator lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InputError
from .exactlinalg import (Vec, in_span, independent_subset,
                          project_affine, rank)
from .linprog import feasible_point, solve_lp
from .rationals import dot, norm2_sq, vec_sub

ZERO = Fraction(0)
ONE = Fraction(1)


def _primitive(v: Vec) -> Vec:
    """Canonical representative of a ray direction: integer, gcd 1."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    if g == 0:
        return tuple(ZERO for _ in v)
    return tuple(Fraction(i, g) for i in ints)


@dataclass(frozen=True)
class GenPolyhedron:
    """conv(points) + cone(rays) in V-representation, exact rationals."""

    points: tuple[Vec, ...]
    rays: tuple[Vec, ...] = ()
    _canonical: bool = field(default=False, compare=False)

    @property
    def dim_ambient(self) -> int:
        if self.points:
            return len(self.points[0])
        if self.rays:
            return len(self.rays[0])
        return 0

    def is_empty(self) -> bool:
        return not self.points

    # -- membership -------------------------------------------------------

    def _membership_system(self, v: Vec, margin: bool):
        """LP system in (mu, nu[, s]) for v = sum mu_i p_i + sum nu_j r_j."""
        np_, nr = len(self.points), len(self.rays)
        d = len(v)
        nvar = np_ + nr + (1 if margin else 0)
        a_eq, b_eq = [], []
        for coord in range(d):
            row = [self.points[i][coord] for i in range(np_)]
            row += [self.rays[j][coord] for j in range(nr)]
            row += [ZERO] * (1 if margin else 0)
            a_eq.append(row)
            b_eq.append(v[coord])
        row = [ONE] * np_ + [ZERO] * nr + ([ZERO] if margin else [])
        a_eq.append(row)
        b_eq.append(ONE)
        a_ub, b_ub = [], []
        for k in range(np_ + nr):
            row = [ZERO] * nvar
            row[k] = -ONE
            if margin:
                row[-1] = ONE
            a_ub.append(row)
            b_ub.append(ZERO)
        return a_eq, b_eq, a_ub, b_ub, nvar

    def contains(self, v: Sequence[Fraction]) -> bool:
        v = tuple(v)
        if self.is_empty():
            return False
        a_eq, b_eq, a_ub, b_ub, _ = self._membership_system(v, margin=False)
        return feasible_point(a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub) is not None

    def ri_contains(self, v: Sequence[Fraction]) -> bool:
        """Relative-interior membership: v is a strictly positive combination
        of all generators (valid for any generating set)."""
        v = tuple(v)
        if self.is_empty():
            return False
        a_eq, b_eq, a_ub, b_ub, nvar = self._membership_system(v, margin=True)
        row = [ZERO] * nvar
        row[-1] = ONE
        a_ub.append(row)
        b_ub.append(ONE)
        obj = [ZERO] * (nvar - 1) + [ONE]
        res = solve_lp(obj, a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub)
        return res.status == "optimal" and res.value is not None and res.value > 0

    def rb_contains(self, v: Sequence[Fraction]) -> bool:
        v = tuple(v)
        return self.contains(v) and not self.ri_contains(v)

    def ri_point(self) -> Vec:
        """Average of points plus the sum of rays: a relative-interior point."""
        if self.is_empty():
            raise InputError("empty polyhedron has no relative interior point")
        k = Fraction(len(self.points))
        avg = [sum((p[i] for p in self.points), ZERO) / k
               for i in range(self.dim_ambient)]
        for r in self.rays:
            for i in range(self.dim_ambient):
                avg[i] += r[i]
        return tuple(avg)

    # -- affine structure --------------------------------------------------

    def affine_hull(self) -> tuple[Vec, list[Vec]]:
        """(base point, basis of the parallel subspace)."""
        if self.is_empty():
            raise InputError("empty polyhedron has no affine hull")
        base = self.points[0]
        span = [vec_sub(p, base) for p in self.points[1:]] + list(self.rays)
        keep = independent_subset(span)
        return base, [span[i] for i in keep]

    def dim(self) -> int:
        return len(self.affine_hull()[1])

    def aff_contains(self, v: Sequence[Fraction]) -> bool:
        base, basis = self.affine_hull()
        return in_span(vec_sub(tuple(v), base), basis)

    # -- canonicalization and equality -------------------------------------

    def canonical(self) -> "GenPolyhedron":
        if self._canonical:
            return self
        pts = sorted(set(self.points))
        rays = sorted({_primitive(r) for r in self.rays
                       if any(x != 0 for x in r)})
        # drop rays generated by the others
        keep_rays: list[Vec] = []
        for i, r in enumerate(rays):
            others = keep_rays + rays[i + 1:]
            if not _in_cone(r, others):
                keep_rays.append(r)
        # drop points expressible via remaining points + rays
        keep_pts: list[Vec] = []
        for i, p in enumerate(pts):
            others = keep_pts + pts[i + 1:]
            if not others:
                keep_pts.append(p)
                continue
            test = GenPolyhedron(tuple(others), tuple(keep_rays))
            if not test.contains(p):
                keep_pts.append(p)
        return GenPolyhedron(tuple(keep_pts), tuple(keep_rays), _canonical=True)

    def recession_contains(self, r: Vec) -> bool:
        if all(x == 0 for x in r):
            return True
        return _in_cone(r, list(self.rays))

    def poly_eq(self, other: "GenPolyhedron") -> bool:
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        return (all(other.contains(p) for p in self.points)
                and all(other.recession_contains(r) for r in self.rays)
                and all(self.contains(p) for p in other.points)
                and all(self.recession_contains(r) for r in other.rays))

    def translate(self, t: Vec) -> "GenPolyhedron":
        return GenPolyhedron(tuple(tuple(p[i] + t[i] for i in range(len(t)))
                                   for p in self.points), self.rays)

    def map_permutation(self, perm) -> "GenPolyhedron":
        return GenPolyhedron(tuple(perm.apply(p) for p in self.points),
                             tuple(perm.apply(r) for r in self.rays))

    def to_json(self) -> dict:
        return {"points": [[str(x) for x in p] for p in self.points],
                "rays": [[str(x) for x in r] for r in self.rays]}


def _in_cone(v: Vec, rays: list[Vec]) -> bool:
    """v in cone(rays) by LP feasibility."""
    if all(x == 0 for x in v):
        return True
    if not rays:
        return False
    d = len(v)
    nr = len(rays)
    a_eq = [[rays[j][coord] for j in range(nr)] for coord in range(d)]
    b_eq = list(v)
    a_ub = [[-ONE if k == j else ZERO for k in range(nr)] for j in range(nr)]
    b_ub = [ZERO] * nr
    return feasible_point(a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub) is not None


# -- double description -----------------------------------------------------


def dd_cone(rows: Sequence[Vec], d: int) -> tuple[list[Vec], list[Vec]]:
    """Generators of the cone {x : <row, x> <= 0 for all rows}.

    Returns (lineality basis, extreme rays).  Incremental double description;
    adjacency of two rays is decided by the exact algebraic test: the rows
    tight at both must have rank d - dim(lineality) - 2.
    """
    lineality: list[Vec] = [
        tuple(ONE if j == i else ZERO for j in range(d)) for i in range(d)]
    rays: list[tuple[Vec, frozenset[int]]] = []  # (direction, tight row ids)
    processed: list[int] = []  # ids of rows already enforced

    for row_id, a in enumerate(rows):
        if all(x == 0 for x in a):
            processed.append(row_id)
            continue
        hit = next((i for i, b in enumerate(lineality) if dot(a, b) != 0), None)
        if hit is not None:
            b0 = lineality.pop(hit)
            ab0 = dot(a, b0)
            lineality = [
                tuple(b[i] - (dot(a, b) / ab0) * b0[i] for i in range(d))
                for b in lineality]
            new_rays = []
            for r, tight in rays:
                ar = dot(a, r)
                r2 = tuple(r[i] - (ar / ab0) * b0[i] for i in range(d))
                new_rays.append((_primitive(r2), tight | {row_id}))
            # the freed lineality direction survives on the feasible side
            r0 = tuple(-x for x in b0) if ab0 > 0 else b0
            new_rays.append((_primitive(r0), frozenset(processed)))
            rays = new_rays
            processed.append(row_id)
            continue
        neg = [(r, t) for r, t in rays if dot(a, r) < 0]
        zero = [(r, t | {row_id}) for r, t in rays if dot(a, r) == 0]
        pos = [(r, t) for r, t in rays if dot(a, r) > 0]
        target_rank = d - len(lineality) - 2
        combos: list[tuple[Vec, frozenset[int]]] = []
        for (rm, tm), (rp, tp) in itertools.product(neg, pos):
            common = tm & tp
            if target_rank > 0:
                if rank([rows[i] for i in common]) != target_rank:
                    continue
            ap, am = dot(a, rp), dot(a, rm)
            w = tuple(ap * rm[i] - am * rp[i] for i in range(d))
            if all(x == 0 for x in w):
                continue
            combos.append((_primitive(w), common | {row_id}))
        rays = list(neg) + zero + combos
        # dedup directions, merging tight sets of coincident rays
        seen: dict[Vec, frozenset[int]] = {}
        for r, t in rays:
            seen[r] = (seen[r] | t) if r in seen else t
        rays = sorted(seen.items())
        processed.append(row_id)

    return lineality, [r for r, _ in rays]


def polyhedron_from_inequalities(eqs: Sequence[tuple[Vec, Fraction]],
                                 ineqs: Sequence[tuple[Vec, Fraction]],
                                 d: int) -> GenPolyhedron:
    """V-representation of {x : eqs hold, <c,x> <= rhs for ineqs} via
    homogenization."""
    rows: list[Vec] = []
    for c, rhs in eqs:
        rows.append(tuple(list(c) + [-rhs]))
        rows.append(tuple([-x for x in c] + [rhs]))
    for c, rhs in ineqs:
        rows.append(tuple(list(c) + [-rhs]))
    rows.append(tuple([ZERO] * d + [-ONE]))  # t >= 0
    lineality, rays = dd_cone(rows, d + 1)
    points: list[Vec] = []
    ray_out: list[Vec] = []
    for g in rays:
        t = g[-1]
        if t > 0:
            points.append(tuple(x / t for x in g[:-1]))
        elif t == 0:
            ray_out.append(g[:-1])
        else:  # t < 0 cannot survive the t >= 0 row
            raise AssertionError("negative homogenization component")
    for b in lineality:
        # lineality with t != 0 is impossible under t >= 0
        ray_out.append(b[:-1])
        ray_out.append(tuple(-x for x in b[:-1]))
    return GenPolyhedron(tuple(points), tuple(ray_out)).canonical()


def cone_polar(k: GenPolyhedron) -> GenPolyhedron:
    """Polar cone {v : <v,w> <= 0 for all w in K} of a V-rep cone."""
    d = k.dim_ambient
    rows = [r for r in k.rays]
    for p in k.points:
        if any(x != 0 for x in p):
            rows.append(p)
    lineality, rays = dd_cone(rows, d)
    gens = list(rays)
    for b in lineality:
        gens.append(b)
        gens.append(tuple(-x for x in b))
    origin = tuple(ZERO for _ in range(d))
    return GenPolyhedron((origin,), tuple(gens)).canonical()


# -- H-representation pieces -------------------------------------------------


@dataclass(frozen=True)
class HPolyhedron:
    """{x : <c,x> = d for eqs, <c,x> <= d for ineqs}."""

    eqs: tuple[tuple[Vec, Fraction], ...]
    ineqs: tuple[tuple[Vec, Fraction], ...]
    dim_ambient: int

    def contains(self, v: Sequence[Fraction]) -> bool:
        v = tuple(v)
        return (all(dot(c, v) == rhs for c, rhs in self.eqs)
                and all(dot(c, v) <= rhs for c, rhs in self.ineqs))

    def v_representation(self) -> GenPolyhedron:
        return polyhedron_from_inequalities(self.eqs, self.ineqs,
                                            self.dim_ambient)

    def active_ineqs(self, v: Vec) -> list[int]:
        return [i for i, (c, rhs) in enumerate(self.ineqs) if dot(c, v) == rhs]

    def tangent_cone(self, v: Sequence[Fraction]) -> GenPolyhedron:
        v = tuple(v)
        if not self.contains(v):
            raise InputError("tangent cone requested at a point outside the set")
        rows = [c for c, _ in self.eqs] + [tuple(-x for x in c)
                                           for c, _ in self.eqs]
        rows += [self.ineqs[i][0] for i in self.active_ineqs(v)]
        lineality, rays = dd_cone(rows, self.dim_ambient)
        gens = list(rays)
        for b in lineality:
            gens.append(b)
            gens.append(tuple(-x for x in b))
        origin = tuple(ZERO for _ in range(self.dim_ambient))
        return GenPolyhedron((origin,), tuple(gens)).canonical()

    def normal_cone(self, v: Sequence[Fraction]) -> GenPolyhedron:
        v = tuple(v)
        if not self.contains(v):
            raise InputError("normal cone requested at a point outside the set")
        gens: list[Vec] = []
        for c, _ in self.eqs:
            gens.append(c)
            gens.append(tuple(-x for x in c))
        gens += [self.ineqs[i][0] for i in self.active_ineqs(v)]
        origin = tuple(ZERO for _ in range(self.dim_ambient))
        return GenPolyhedron((origin,), tuple(gens)).canonical()

    # -- exact Euclidean projection ----------------------------------------

    def _is_axis_bounds(self) -> bool:
        return not self.eqs and all(
            sum(1 for x in c if x != 0) == 1 for c, _ in self.ineqs)

    def project(self, z: Sequence[Fraction]) -> Vec:
        """Exact nearest point (the set is convex, so it is unique)."""
        z = tuple(z)
        if self.contains(z):
            return z
        if self._is_axis_bounds():
            lo = [None] * self.dim_ambient
            hi = [None] * self.dim_ambient
            for c, rhs in self.ineqs:
                i = next(k for k, x in enumerate(c) if x != 0)
                if c[i] > 0:
                    bound = rhs / c[i]
                    hi[i] = bound if hi[i] is None else min(hi[i], bound)
                else:
                    bound = rhs / c[i]
                    lo[i] = bound if lo[i] is None else max(lo[i], bound)
            out = list(z)
            for i in range(self.dim_ambient):
                if lo[i] is not None and out[i] < lo[i]:
                    out[i] = lo[i]
                if hi[i] is not None and out[i] > hi[i]:
                    out[i] = hi[i]
            return tuple(out)
        if not self.ineqs:
            y = project_affine(z, [c for c, _ in self.eqs],
                               [rhs for _, rhs in self.eqs])
            if y is None:
                raise InputError("projection onto an empty affine set")
            return y
        if not self.eqs and len(self.ineqs) == 1:
            (c, rhs), = self.ineqs
            excess = dot(c, z) - rhs
            nn = norm2_sq(c)
            return tuple(z[i] - excess * c[i] / nn for i in range(len(z)))
        best = self._project_general(z)
        if best is None:
            raise InputError("projection onto an empty polyhedron")
        return best

    def _project_general(self, z: Vec) -> Vec | None:
        best_d2: Fraction | None = None
        best: Vec | None = None
        m = len(self.ineqs)
        eq_rows = [c for c, _ in self.eqs]
        eq_rhs = [rhs for _, rhs in self.eqs]
        base_rank = rank(eq_rows) if eq_rows else 0
        max_extra = self.dim_ambient - base_rank
        for size in range(0, max_extra + 1):
            for subset in itertools.combinations(range(m), size):
                rows = eq_rows + [self.ineqs[i][0] for i in subset]
                if rank(rows) != base_rank + size:
                    continue
                rhs = eq_rhs + [self.ineqs[i][1] for i in subset]
                y = project_affine(z, rows, rhs)
                if y is None or not self.contains(y):
                    continue
                d2 = norm2_sq(vec_sub(z, y))
                if best_d2 is None or d2 < best_d2:
                    best_d2, best = d2, y
        return best

    def to_json(self) -> dict:
        return {
            "eqs": [{"c": [str(x) for x in c], "d": str(rhs)}
                    for c, rhs in self.eqs],
            "ineqs": [{"c": [str(x) for x in c], "d": str(rhs)}
                      for c, rhs in self.ineqs],
            "n": self.dim_ambient,
        }


@dataclass(frozen=True)
class RelOpenPoly:
    """A relatively open polyhedron, encoded as (closure, open flag)."""

    closure: GenPolyhedron
    is_open: bool = True

    def contains(self, v: Sequence[Fraction]) -> bool:
        if not self.is_open:
            return self.closure.contains(v)
        return self.closure.ri_contains(v)

    def dim(self) -> int:
        return self.closure.dim()

    def poly_eq(self, other: "RelOpenPoly") -> bool:
        return self.is_open == other.is_open and self.closure.poly_eq(other.closure)

    def to_json(self) -> dict:
        return {"closure": self.closure.to_json(), "open": self.is_open}


@dataclass(frozen=True)
class RelOpenUnion:
    """Disjoint union of relatively open polyhedra (sym-orbit images)."""

    components: tuple[RelOpenPoly, ...]

    def contains(self, v: Sequence[Fraction]) -> bool:
        return any(c.contains(v) for c in self.components)

    def poly_eq(self, other: "RelOpenUnion") -> bool:
        if len(self.components) != len(other.components):
            return False
        used = [False] * len(other.components)
        for c in self.components:
            hit = next((i for i, d in enumerate(other.components)
                        if not used[i] and c.poly_eq(d)), None)
            if hit is None:
                return False
            used[hit] = True
        return True

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}
