"""Exact calculus for symmetric convex polyhedral functions.

A MaxAffineFn is f(x) = max_i <a_i, x> + b_i on {x : <c_j, x> <= d_j}, all
coefficients rational, with the piece/constraint sets closed under the
declared symmetry group.  On top of it:

  * exact values, subdifferential polytopes, tangent/normal cones,
  * the face stratification of dom f (one stratum per realizable pattern of
    active pieces and tight constraints, i.e. per projected open face of the
    epigraph),
  * Fenchel conjugation by LP over the epigraph, and the duality map
    J_f(M) = ri subdiff(f, .) pairing primal and dual strata.

The conjugate f* is never recovered as an explicit piece list; it is served
by oracles (value LP, optimal-face subdifferential, stratification by J_f
images), which is all the duality theory needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError, InputError
from .exactlinalg import Vec
from .linprog import solve_lp, strict_feasible_point
from .polyhedra import (GenPolyhedron, HPolyhedron, RelOpenPoly, RelOpenUnion,
                        cone_polar, polyhedron_from_inequalities)
from .rationals import dot, format_rational, parse_rational, parse_vector, vec_sub
from .symmetry import (PermutationElement, enumerate_permutations,
                       enumerate_signed_permutations)

ZERO = Fraction(0)
ONE = Fraction(1)

INF = math.inf

MAX_ROWS_BUDGET = 64
MAX_FACES_BUDGET = 20000


def _closure_group(n: int, mode: str) -> list[PermutationElement]:
    if mode == "plain":
        return [PermutationElement.identity(n)]
    if mode == "permutation":
        return list(enumerate_permutations(n))
    if mode == "signed":
        return list(enumerate_signed_permutations(n))
    raise InputError(f"unknown symmetry mode {mode!r}")


@dataclass(frozen=True)
class MaxAffineFn:
    """max of affine pieces plus polyhedral domain constraints, exact."""

    pieces: tuple[tuple[Vec, Fraction], ...]
    constraints: tuple[tuple[Vec, Fraction], ...]
    n: int
    symmetry_mode: str = "plain"
    name: str = ""

    @classmethod
    def create(cls, pieces: Iterable, constraints: Iterable = (), *,
               symmetry_mode: str = "plain", name: str = "",
               n: int | None = None) -> "MaxAffineFn":
        raw_pieces = [(parse_vector(a), parse_rational(b)) for a, b in pieces]
        raw_cons = [(parse_vector(c), parse_rational(d)) for c, d in constraints]
        if n is None:
            if not raw_pieces and not raw_cons:
                raise InputError("cannot infer dimension")
            n = len((raw_pieces or raw_cons)[0][0])
        if not raw_pieces:
            raise InputError("at least one affine piece is required "
                             "(indicators use the zero piece)")
        group = _closure_group(n, symmetry_mode)
        piece_set = {(sigma.apply(a), b) for a, b in raw_pieces for sigma in group}
        cons_set = {(sigma.apply(c), d) for c, d in raw_cons for sigma in group}
        f = cls(tuple(sorted(piece_set)), tuple(sorted(cons_set)), n,
                symmetry_mode, name)
        if f.total_rows() > MAX_ROWS_BUDGET:
            raise BudgetExceededError(
                f"{f.total_rows()} rows exceed the enumeration budget")
        if strict_feasible_point(
                a_weak=[c for c, _ in f.constraints],
                b_weak=[d for _, d in f.constraints],
                a_strict=[[ZERO] * n], b_strict=[ONE]) is None:
            raise InputError("empty domain")
        return f

    def total_rows(self) -> int:
        return len(self.pieces) + len(self.constraints)

    # -- evaluation ---------------------------------------------------------

    def value(self, x: Sequence) -> Fraction | float:
        x = parse_vector(x)
        if any(dot(c, x) > d for c, d in self.constraints):
            return INF
        return max(dot(a, x) + b for a, b in self.pieces)

    def value_float(self, x, tol: float = 0.0) -> float:
        xa = np.asarray(x, dtype=float)
        for c, d in self.constraints:
            if float(np.dot([float(q) for q in c], xa)) > float(d) + tol:
                return INF
        return max(float(np.dot([float(q) for q in a], xa)) + float(b)
                   for a, b in self.pieces)

    def in_domain(self, x: Sequence) -> bool:
        x = parse_vector(x)
        return all(dot(c, x) <= d for c, d in self.constraints)

    def active_pattern(self, x: Sequence) -> tuple[frozenset[int], frozenset[int]]:
        """(argmax piece ids, tight constraint ids) at a domain point."""
        x = parse_vector(x)
        vals = [dot(a, x) + b for a, b in self.pieces]
        fx = max(vals)
        if any(dot(c, x) > d for c, d in self.constraints):
            raise DomainError("point outside dom f")
        i_set = frozenset(i for i, v in enumerate(vals) if v == fx)
        j_set = frozenset(j for j, (c, d) in enumerate(self.constraints)
                          if dot(c, x) == d)
        return i_set, j_set

    def subdiff(self, x: Sequence) -> GenPolyhedron:
        """Exact subdifferential conv{a_i active} + cone{c_j active}."""
        x = parse_vector(x)
        if not self.in_domain(x):
            raise DomainError("subdifferential requested outside dom f")
        i_set, j_set = self.active_pattern(x)
        pts = tuple(self.pieces[i][0] for i in sorted(i_set))
        rays = tuple(self.constraints[j][0] for j in sorted(j_set))
        return GenPolyhedron(pts, rays).canonical()

    def domain(self) -> HPolyhedron:
        return HPolyhedron((), self.constraints, self.n)

    def epigraph_rows(self) -> list[tuple[Vec, Fraction]]:
        """H-rep rows of epi f in R^{n+1}: (a_i,-1).(x,t) <= -b_i and
        (c_j,0).(x,t) <= d_j.  Piece rows come first."""
        rows = [(tuple(list(a) + [-ONE]), -b) for a, b in self.pieces]
        rows += [(tuple(list(c) + [ZERO]), d) for c, d in self.constraints]
        return rows

    def group(self) -> list[PermutationElement]:
        return _closure_group(self.n, self.symmetry_mode)

    def piece_index_map(self, sigma: PermutationElement) -> dict[int, int]:
        """How sigma permutes piece indices: piece a -> sigma(a)."""
        lookup = {p: i for i, p in enumerate(self.pieces)}
        return {i: lookup[(sigma.apply(a), b)]
                for i, (a, b) in enumerate(self.pieces)}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "symmetry_mode": self.symmetry_mode,
            "pieces": [{"a": [format_rational(x) for x in a],
                        "b": format_rational(b)} for a, b in self.pieces],
            "constraints": [{"c": [format_rational(x) for x in c],
                             "d": format_rational(d)}
                            for c, d in self.constraints],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaxAffineFn":
        return cls.create(
            [(p["a"], p["b"]) for p in data.get("pieces", [])],
            [(c["c"], c["d"]) for c in data.get("constraints", [])],
            symmetry_mode=data.get("symmetry_mode", "plain"),
            name=data.get("name", ""),
            n=data.get("n"))


# -- thin wrappers over GenPolyhedron (spec-level operation names) -----------


def aff_hull(p: GenPolyhedron) -> tuple[Vec, list[Vec]]:
    return p.affine_hull()


def ri_contains(p: GenPolyhedron, v) -> bool:
    return p.ri_contains(parse_vector(v))


def rb_contains(p: GenPolyhedron, v) -> bool:
    return p.rb_contains(parse_vector(v))


def ri_point(p: GenPolyhedron) -> Vec:
    return p.ri_point()


def polar(k: GenPolyhedron) -> GenPolyhedron:
    return cone_polar(k)


def _as_hpoly(q) -> HPolyhedron:
    if isinstance(q, HPolyhedron):
        return q
    if isinstance(q, MaxAffineFn):
        return q.domain()
    raise InputError(f"no H-representation for {type(q).__name__}")


def tangent_cone(q, x) -> GenPolyhedron:
    x = parse_vector(x)
    if isinstance(q, GenPolyhedron):
        if not q.contains(x):
            raise InputError("tangent cone requested at a point outside the set")
        gens = [vec_sub(p, x) for p in q.points] + list(q.rays)
        origin = tuple(ZERO for _ in x)
        return GenPolyhedron((origin,), tuple(gens)).canonical()
    return _as_hpoly(q).tangent_cone(x)


def normal_cone(q, x) -> GenPolyhedron:
    x = parse_vector(x)
    t = tangent_cone(q, x)
    n = cone_polar(t)
    if isinstance(q, (HPolyhedron, MaxAffineFn)):
        direct = _as_hpoly(q).normal_cone(x)
        assert direct.poly_eq(n), "normal cone is not polar to tangent cone"
        return direct
    return n


# -- stratification -----------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Relatively open face of dom f: pieces in `active_pieces` tie and
    strictly dominate, constraints in `active_constraints` are tight."""

    active_pieces: frozenset[int]
    active_constraints: frozenset[int]
    dim: int
    closure: GenPolyhedron
    representative: Vec

    def key(self) -> tuple:
        return (tuple(sorted(self.active_pieces)),
                tuple(sorted(self.active_constraints)))

    def rel_open(self) -> RelOpenPoly:
        return RelOpenPoly(self.closure, is_open=True)

    def contains(self, f: "MaxAffineFn", x: Sequence) -> bool:
        x = parse_vector(x)
        if not f.in_domain(x):
            return False
        return f.active_pattern(x) == (self.active_pieces,
                                       self.active_constraints)

    def closure_system(self, f: "MaxAffineFn"
                       ) -> tuple[list[tuple[Vec, Fraction]],
                                  list[tuple[Vec, Fraction]]]:
        """(equalities, weak inequalities) cutting out cl(stratum)."""
        eqs: list[tuple[Vec, Fraction]] = []
        ids = sorted(self.active_pieces)
        a0, b0 = f.pieces[ids[0]]
        for i in ids[1:]:
            ai, bi = f.pieces[i]
            eqs.append((vec_sub(ai, a0), b0 - bi))
        for j in sorted(self.active_constraints):
            eqs.append(f.constraints[j])
        ineqs: list[tuple[Vec, Fraction]] = []
        for k, (ak, bk) in enumerate(f.pieces):
            if k not in self.active_pieces:
                ineqs.append((vec_sub(ak, a0), b0 - bk))
        for j, (c, d) in enumerate(f.constraints):
            if j not in self.active_constraints:
                ineqs.append((c, d))
        return eqs, ineqs

    def to_json(self) -> dict:
        return {
            "active_pieces": sorted(i + 1 for i in self.active_pieces),
            "active_constraints": sorted(j + 1 for j in self.active_constraints),
            "dim": self.dim,
            "representative": [format_rational(x) for x in self.representative],
            "closure": self.closure.to_json(),
        }


@dataclass
class Stratification:
    f: MaxAffineFn
    strata: list[Stratum]
    closure_order: list[tuple[int, int]]  # (i, j): strata[i] subset cl strata[j]
    sym_orbits: list[tuple[int, ...]]
    frontier_checked: bool

    def stratum_of(self, x: Sequence) -> int | None:
        x = parse_vector(x)
        if not self.f.in_domain(x):
            return None
        pattern = self.f.active_pattern(x)
        return self._by_pattern.get(pattern)

    def stratum_of_float(self, x, tol: float) -> int | None:
        """Interval-mode pattern lookup for spectra that do not snap to
        rationals under the denominator cap."""
        xa = np.asarray(x, dtype=float)
        f = self.f
        cons_vals = [float(np.dot([float(q) for q in c], xa)) - float(d)
                     for c, d in f.constraints]
        if any(v > tol for v in cons_vals):
            return None
        piece_vals = [float(np.dot([float(q) for q in a], xa)) + float(b)
                      for a, b in f.pieces]
        fx = max(piece_vals)
        pattern = (frozenset(i for i, v in enumerate(piece_vals)
                             if v >= fx - tol),
                   frozenset(j for j, v in enumerate(cons_vals)
                             if abs(v) <= tol))
        return self._by_pattern.get(pattern)

    @property
    def _by_pattern(self) -> dict:
        cached = getattr(self, "_pattern_cache", None)
        if cached is None:
            cached = {(s.active_pieces, s.active_constraints): i
                      for i, s in enumerate(self.strata)}
            self._pattern_cache = cached
        return cached

    def orbit_of(self, i: int) -> tuple[int, ...]:
        for orbit in self.sym_orbits:
            if i in orbit:
                return orbit
        raise InputError(f"stratum {i} not in any orbit")

    def to_json(self) -> dict:
        return {
            "strata": [s.to_json() for s in self.strata],
            "closure_order": [[i, j] for i, j in self.closure_order],
            "sym_orbits": [list(o) for o in self.sym_orbits],
            "frontier_checked": self.frontier_checked,
        }


def _face_lattice(gens_points: list[Vec], gens_rays: list[Vec],
                  rows: list[tuple[Vec, Fraction]], faces_budget: int
                  ) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Closed incidence sets of a polyhedron given V-rep and H-rep.

    Generators are indexed points-first; returns (generator ids, active row
    ids) per nonempty face, the full polyhedron included.
    """
    npts = len(gens_points)
    incidence: list[frozenset[int]] = []
    for c, rhs in rows:
        tight = set()
        for i, p in enumerate(gens_points):
            if dot(c, p) == rhs:
                tight.add(i)
        for j, r in enumerate(gens_rays):
            if dot(c, r) == 0:
                tight.add(npts + j)
        incidence.append(frozenset(tight))
    everything = frozenset(range(npts + len(gens_rays)))
    seen: set[frozenset[int]] = {everything}
    queue = [everything]
    out = []
    while queue:
        face = queue.pop()
        out.append(face)
        if len(out) > faces_budget:
            raise BudgetExceededError("face enumeration budget exhausted")
        for inc in incidence:
            sub = face & inc
            if sub in seen or not any(g < npts for g in sub):
                continue
            seen.add(sub)
            queue.append(sub)
    result = []
    for face in out:
        active = frozenset(k for k, inc in enumerate(incidence)
                           if face <= inc)
        result.append((face, active))
    return result


def stratify(f: MaxAffineFn, *, verify_frontier: bool = True,
             faces_budget: int = MAX_FACES_BUDGET) -> Stratification:
    """Stratification of dom f by projected open faces of the epigraph.

    Each stratum is indexed by its realizable pattern (active pieces, tight
    constraints); distinct epigraph faces that would project onto the same
    point set collapse to the same pattern, so the strata partition dom f.
    """
    rows = f.epigraph_rows()
    epi = polyhedron_from_inequalities((), rows, f.n + 1)
    pts = list(epi.points)
    rays = list(epi.rays)
    npieces = len(f.pieces)
    strata: list[Stratum] = []
    for gen_ids, active in _face_lattice(pts, rays, rows, faces_budget):
        piece_ids = frozenset(k for k in active if k < npieces)
        if not piece_ids:
            continue  # vertical face: projects onto a union of strata
        cons_ids = frozenset(k - npieces for k in active if k >= npieces)
        proj_pts = tuple(p[:-1] for i, p in enumerate(pts) if i in gen_ids)
        proj_rays = tuple(r[:-1] for j, r in enumerate(rays)
                          if len(pts) + j in gen_ids)
        closure = GenPolyhedron(proj_pts, proj_rays).canonical()
        rep = closure.ri_point()
        pattern = f.active_pattern(rep)
        assert pattern == (piece_ids, cons_ids), "face/pattern mismatch"
        strata.append(Stratum(piece_ids, cons_ids, closure.dim(), closure, rep))
    strata.sort(key=lambda s: s.key())

    by_pattern = {(s.active_pieces, s.active_constraints): i
                  for i, s in enumerate(strata)}

    # orbits under the symmetry group, computed through the piece index maps
    parent = list(range(len(strata)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri_, rj = find(i), find(j)
        if ri_ != rj:
            parent[max(ri_, rj)] = min(ri_, rj)

    cons_lookup = {c: j for j, c in enumerate(f.constraints)}
    for sigma in f.group():
        pmap = f.piece_index_map(sigma)
        cmap = {j: cons_lookup[(sigma.apply(c), d)]
                for j, (c, d) in enumerate(f.constraints)}
        for i, s in enumerate(strata):
            image = (frozenset(pmap[k] for k in s.active_pieces),
                     frozenset(cmap[k] for k in s.active_constraints))
            j = by_pattern.get(image)
            assert j is not None, "symmetry does not permute strata"
            union(i, j)
    orbit_map: dict[int, list[int]] = {}
    for i in range(len(strata)):
        orbit_map.setdefault(find(i), []).append(i)
    sym_orbits = [tuple(v) for _, v in sorted(orbit_map.items())]

    closure_order: list[tuple[int, int]] = []
    frontier_checked = False
    if verify_frontier:
        frontier_checked = True
        systems = [s.closure_system(f) for s in strata]
        for i, si in enumerate(strata):
            for j, sj in enumerate(strata):
                if i == j:
                    continue
                eqs_j, ineqs_j = systems[j]
                contained = all(
                    all(dot(c, p) == rhs for c, rhs in eqs_j)
                    and all(dot(c, p) <= rhs for c, rhs in ineqs_j)
                    for p in si.closure.points) and all(
                    all(dot(c, r) == 0 for c, _ in eqs_j)
                    and all(dot(c, r) <= 0 for c, _ in ineqs_j)
                    for r in si.closure.rays)
                # the lattice guarantees: cl M_i inside cl M_j iff the active
                # pattern of j is a subset of the pattern of i; checking both
                # sides exactly certifies the frontier condition combinatorially
                nested = (sj.active_pieces <= si.active_pieces
                          and sj.active_constraints <= si.active_constraints)
                if contained != nested:
                    raise AssertionError(
                        f"face lattice inconsistent for strata {i}, {j}")
                if contained:
                    closure_order.append((i, j))
        # LP cross-check of the emptiness side on small instances
        if len(strata) <= 12:
            in_order = set(closure_order)
            for i, si in enumerate(strata):
                for j, sj in enumerate(strata):
                    if i == j or (i, j) in in_order:
                        continue
                    eqs_i, ineqs_i = systems[i]
                    eqs_j, ineqs_j = systems[j]
                    witness = strict_feasible_point(
                        a_eq=[c for c, _ in eqs_i] + [c for c, _ in eqs_j],
                        b_eq=[r for _, r in eqs_i] + [r for _, r in eqs_j],
                        a_strict=[c for c, _ in ineqs_i],
                        b_strict=[r for _, r in ineqs_i],
                        a_weak=[c for c, _ in ineqs_j],
                        b_weak=[r for _, r in ineqs_j])
                    if witness is not None:
                        raise AssertionError(
                            f"frontier condition violated for strata {i}, {j}")
    return Stratification(f, strata, closure_order, sym_orbits, frontier_checked)


# -- duality map and conjugation ----------------------------------------------


def dual_map(f: MaxAffineFn, target, strat: Stratification | None = None):
    """J_f on a stratum (-> RelOpenPoly) or a sym-orbit (-> RelOpenUnion).

    The subdifferential is constant on a stratum, so J_f(M) is just
    ri subdiff(f, representative); orbits map to the disjoint union over
    their strata.
    """
    if isinstance(target, Stratum):
        return RelOpenPoly(f.subdiff(target.representative))
    if isinstance(target, (tuple, list)):
        if strat is None:
            raise InputError("orbit form needs the stratification")
        comps = tuple(RelOpenPoly(f.subdiff(strat.strata[i].representative))
                      for i in target)
        return RelOpenUnion(comps)
    raise InputError(f"cannot apply the duality map to {type(target).__name__}")


def conjugate_value(f: MaxAffineFn, y: Sequence) -> Fraction | float:
    """f*(y) = sup <x,y> - t over the epigraph, by a single exact LP."""
    y = parse_vector(y)
    obj = list(y) + [-ONE]
    rows = f.epigraph_rows()
    res = solve_lp(obj, a_ub=[c for c, _ in rows], b_ub=[d for _, d in rows])
    if res.status == "unbounded":
        return INF
    if res.status != "optimal":
        raise InputError("epigraph LP infeasible; malformed function")
    assert res.value is not None
    return res.value


class ConjugateOracle:
    """f* served by oracles: value LP, optimal-face subdifferential, and the
    stratification transported through J_f."""

    def __init__(self, f: MaxAffineFn):
        self.f = f

    def value(self, y: Sequence) -> Fraction | float:
        return conjugate_value(self.f, y)

    def argmax_point(self, y: Sequence) -> Vec | None:
        y = parse_vector(y)
        rows = self.f.epigraph_rows()
        res = solve_lp(list(y) + [-ONE],
                       a_ub=[c for c, _ in rows], b_ub=[d for _, d in rows])
        if res.status != "optimal" or res.x is None:
            return None
        return res.x[:-1]

    def subdiff(self, y: Sequence) -> GenPolyhedron:
        """∂f*(y) = argmax_x {<x,y> - f(x)}: the optimal epigraph face,
        projected to x-space (subgradient inversion)."""
        y = parse_vector(y)
        val = self.value(y)
        if val is INF:
            raise DomainError("y outside dom f*")
        rows = self.f.epigraph_rows()
        eq = (tuple(list(y) + [-ONE]), val)
        face = polyhedron_from_inequalities([eq], rows, self.f.n + 1)
        return GenPolyhedron(tuple(p[:-1] for p in face.points),
                             tuple(r[:-1] for r in face.rays)).canonical()


@dataclass
class DualStratification:
    """A_{f*} as images of the primal strata under J_f, with the pairing."""

    primal: Stratification
    dual_strata: list[RelOpenPoly]  # dual_strata[i] = J_f(primal stratum i)
    oracle: ConjugateOracle

    def dual_stratum_of(self, y: Sequence) -> int | None:
        y = parse_vector(y)
        for i, d in enumerate(self.dual_strata):
            if d.contains(y):
                return i
        return None

    def pairing_table(self) -> list[dict]:
        out = []
        for i, s in enumerate(self.primal.strata):
            out.append({
                "primal": i,
                "dual": i,
                "primal_dim": s.dim,
                "dual_dim": self.dual_strata[i].dim(),
            })
        return out


def conjugate_stratification(f: MaxAffineFn,
                             strat: Stratification | None = None,
                             *, verify_bijection: bool = True
                             ) -> DualStratification:
    """Build A_{f*} = {J_f(M)} and (optionally) certify J_{f*} . J_f = id by
    the optimal-face subdifferential of f* at dual representatives."""
    strat = strat or stratify(f)
    oracle = ConjugateOracle(f)
    dual = [RelOpenPoly(f.subdiff(s.representative)) for s in strat.strata]
    if verify_bijection:
        for s, d in zip(strat.strata, dual):
            y = d.closure.ri_point()
            back = oracle.subdiff(y)
            if not back.poly_eq(s.closure):
                raise AssertionError(
                    "duality bijection failed: J_f* . J_f is not the identity")
    return DualStratification(strat, dual, oracle)


def fenchel_young_check(f: MaxAffineFn, x: Sequence, y: Sequence) -> bool:
    """Exact Fenchel-Young: <x,y> <= f(x) + f*(y), with equality iff
    y in subdiff f(x)."""
    x, y = parse_vector(x), parse_vector(y)
    fx = f.value(x)
    fy = conjugate_value(f, y)
    pairing = dot(x, y)
    if fx is INF or fy is INF:
        return True  # inequality trivially strict; no subgradient relation
    inequality = pairing <= fx + fy
    member = f.in_domain(x) and f.subdiff(x).contains(y)
    equality = pairing == fx + fy
    return inequality and (equality == member)


def biconjugate_check(f: MaxAffineFn, x: Sequence,
                      samples: Sequence | None = None) -> bool:
    """f**(x) = f(x), exactly, by the nested-LP route: the epigraph V-rep
    induces the H-rep of epi f*, over which f** is one more LP."""
    x = parse_vector(x)
    fx = f.value(x)
    if fx is INF:
        raise DomainError("biconjugate check requires x in dom f")
    epi = polyhedron_from_inequalities((), f.epigraph_rows(), f.n + 1)
    a_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    for p in epi.points:  # s >= <xv, y> - tv
        a_ub.append(list(p[:-1]) + [-ONE])
        b_ub.append(p[-1])
    for r in epi.rays:  # recession: <xr, y> <= tr
        a_ub.append(list(r[:-1]) + [ZERO])
        b_ub.append(r[-1])
    obj = list(x) + [-ONE]
    res = solve_lp(obj, a_ub=a_ub, b_ub=b_ub)
    if res.status != "optimal":
        return False
    if res.value != fx:
        return False
    if samples:
        for y in samples:
            y = parse_vector(y)
            fy = conjugate_value(f, y)
            if fy is not INF and dot(x, y) - fy > fx:
                return False
    return True
