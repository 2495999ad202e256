"""Numerical verification laboratory: metric-projection calculus probes,
prox-regularity, identifiability sequences, the four partial-smoothness
conditions, finite-identification experiments, and the nonsmooth-conjugate
counterexample oracle.

Probes are deterministic given (inputs, seed) and always report their worst
case.  Sequence generators are part of the contract: a pass certifies the
named generator families, not the universal quantifier in the definitions.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import AmbiguousProjectionError, InputError
from .exactlinalg import (Vec, orthogonal_complement_basis, same_span)
from .lift import (SpectralFn, spectral_prox, spectral_value, vector_prox,
                   _snap_or_none)
from .matdecomp import (SymMatrix, eig_sym, random_orthogonal)
from .polyfun import MaxAffineFn, Stratification, Stratum
from .polyhedra import GenPolyhedron
from .rationals import (dot, from_float_exact, norm2_sq, parse_vector,
                        vec_sub)
from .reports import IdentificationTrace, ProbeReport, SpectrumPattern
from .vsets import VectorSet

ZERO = Fraction(0)
ONE = Fraction(1)
INF = math.inf

MIN_POST_TAIL = 10  # iterates required after the reported tail index


class InconclusiveError(InputError):
    """A grid search attained its maximum on the box boundary."""


def _dyadic(x) -> Vec:
    return tuple(from_float_exact(float(v)) for v in np.asarray(x, dtype=float))


def _distance_sq(q: VectorSet, z: Vec) -> Fraction:
    return q.projection_candidates(z)[0][0]


def _unique_projection(q: VectorSet, z: Vec, slack: float = 1e-9,
                       diameter_tol: float = 1e-7) -> Vec:
    near = q.near_minimizers(z, slack)
    if len(near) > 1:
        diam = max(float(norm2_sq(vec_sub(a, b))) ** 0.5
                   for a, b in itertools.combinations(near, 2))
        if diam > diameter_tol:
            raise AmbiguousProjectionError("projection not single-valued")
    return near[0]


def moreau_gradient_check(q: VectorSet, x, step: float = 1e-4,
                          tol: float = 1e-5) -> ProbeReport:
    """grad of h = .5|x|^2 - .5 d_Q^2 equals the projection P_Q: central
    finite differences of h against the exact projection, componentwise."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    proj = _unique_projection(q, _dyadic(x))

    def h(z: np.ndarray) -> float:
        zq = _dyadic(z)
        return 0.5 * float(norm2_sq(zq)) - 0.5 * float(_distance_sq(q, zq))

    worst = {"component": None, "deviation": 0.0, "threshold": tol, "x": x.tolist()}
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        fd = (h(x + e) - h(x - e)) / (2 * step)
        dev = abs(fd - float(proj[i]))
        if dev > worst["deviation"]:
            worst.update(component=i, deviation=dev)
    return ProbeReport("moreau_gradient", worst["deviation"] <= tol, worst,
                       trials=n, details={"step": step})


def projection_derivative_check(q: VectorSet, xbar,
                                steps: Sequence[float] = (1e-2, 1e-3, 1e-4),
                                tol: float = 1e-4) -> ProbeReport:
    """One-sided difference quotients of P_Q at xbar: along normal directions
    they vanish, along tangent directions they reproduce the direction; the
    defect must shrink monotonically across the step ladder."""
    xq = _dyadic(xbar)
    piece = next((p for p in q.pieces if p.contains(xq)), None)
    if piece is None:
        raise InputError("xbar must lie in Q")
    tangent = piece.tangent_cone(xq)
    normal = piece.normal_cone(xq)

    def quotient(direction: np.ndarray, t: float) -> np.ndarray:
        z = np.asarray(xbar, dtype=float) + t * direction
        p = _unique_projection(q, _dyadic(z))
        return (np.array([float(v) for v in p], dtype=float)
                - np.asarray(xbar, dtype=float)) / t

    worst = {"direction": None, "kind": None, "deviation": 0.0,
             "threshold": tol}
    passed = True
    cases = [("normal", r, np.zeros(len(xq))) for r in normal.rays]
    cases += [("tangent", r, np.array([float(v) for v in r])) for r in tangent.rays]
    for kind, direction, target in cases:
        dvec = np.array([float(v) for v in direction])
        nd = np.linalg.norm(dvec)
        if nd == 0:
            continue
        dvec = dvec / nd
        target = target / nd if kind == "tangent" else target
        defects = [float(np.linalg.norm(quotient(dvec, t) - target))
                   for t in steps]
        final = defects[-1]
        # below the float-noise floor the ladder has nothing left to shrink
        monotone = all(defects[k + 1] <= max(defects[k], 1e-9)
                       for k in range(len(defects) - 1))
        if final > worst["deviation"]:
            worst.update(direction=dvec.tolist(), kind=kind, deviation=final)
        if final > tol or not monotone:
            passed = False
            worst.update(direction=dvec.tolist(), kind=kind, deviation=final,
                         monotone=monotone)
    return ProbeReport("projection_derivative", passed, worst,
                       trials=len(cases), details={"steps": list(steps)})


def _ambiguity_candidates(q: VectorSet, xq: Vec) -> list[Vec]:
    """Structured points likely to witness multivalued projections: pairwise
    midpoints of the per-piece projections of xbar (finite sets: midpoints of
    the pieces themselves)."""
    projs = [y for _, y in q.projection_candidates(xq)]
    out: list[Vec] = []
    for a, b in itertools.combinations(projs, 2):
        out.append(tuple((ai + bi) / 2 for ai, bi in zip(a, b)))
    return out


def prox_regularity_probe(q: VectorSet, xbar, radius: float, trials: int,
                          seed: int, *, slack: float = 1e-9,
                          diameter_tol: float = 1e-7,
                          spectral: bool = False) -> ProbeReport:
    """Single-valuedness of P_Q on a ball: at every sampled point, all
    near-optimal piece projections must agree.  Structured equidistance
    candidates (piece-projection midpoints) are always included so unions
    like two-point sets fail where they should.  With spectral=True the same
    points are lifted through seeded conjugations and the matrix-level
    distance must reproduce the vector-level one."""
    if radius <= 0:
        raise InputError("radius must be positive")
    rng = np.random.default_rng(seed)
    xb = np.asarray(xbar, dtype=float)
    n = len(xb)
    points: list[np.ndarray] = []
    for _ in range(trials):
        u = rng.standard_normal(n)
        u = u / np.linalg.norm(u)
        points.append(xb + radius * rng.random() ** (1.0 / n) * u)
    for cand in _ambiguity_candidates(q, _dyadic(xb)):
        c = np.array([float(v) for v in cand])
        if np.linalg.norm(c - xb) <= radius:
            points.append(c)
    passed = True
    worst = {"y": None, "n_minimizers": 1, "diameter": 0.0,
             "threshold": diameter_tol}
    matrix_gap = 0.0
    for y in points:
        yq = _dyadic(y)
        near = q.near_minimizers(yq, slack)
        if len(near) > 1:
            diam = max(float(norm2_sq(vec_sub(a, b))) ** 0.5
                       for a, b in itertools.combinations(near, 2))
            if diam > diameter_tol and diam > worst["diameter"]:
                passed = False
                worst = {"y": y.tolist(), "n_minimizers": len(near),
                         "diameter": diam, "threshold": diameter_tol}
        if spectral:
            u = random_orthogonal(n, rng)
            ymat = SymMatrix(u.entries.T @ np.diag(sorted(y, reverse=True))
                             @ u.entries)
            from .lift import spectral_distance
            dvec = q.distance(_dyadic(sorted(y, reverse=True)))
            dmat = spectral_distance(q, ymat)
            matrix_gap = max(matrix_gap, abs(dvec - dmat))
    details = {"radius": radius}
    if spectral:
        details["matrix_vector_gap"] = matrix_gap
        if matrix_gap > 1e-8:
            passed = False
    return ProbeReport("prox_regularity", passed, worst, len(points), seed,
                       details)


# -- identifiability -----------------------------------------------------------


def _orbit_strata(strat: Stratification, idx: int) -> tuple[int, ...]:
    return strat.orbit_of(idx)


def identifiability_test(f: MaxAffineFn, strat: Stratification, m_index: int,
                         xbar, vbar, generator: str, trials: int, seed: int,
                         *, t=Fraction(1, 2), lifted: bool = False,
                         expect_admissible_failure: bool = False
                         ) -> ProbeReport:
    """Generate subgradient-consistent sequences converging to (xbar, vbar)
    and report the tail index from which the iterates sit inside the stratum.

    Generators: "prox_path" (proximal points of perturbed anchors),
    "stratum_hop" (segments inside neighboring strata whose subdifferential
    still contains vbar; such sequences exist exactly when vbar sits on the
    relative boundary, and they are the expected-failure witnesses).
    With lifted=True the same sequences are conjugated into matrix space and
    membership is tested on lambda^{-1}(M^sym) instead.
    """
    xq, vq = parse_vector(xbar), parse_vector(vbar)
    if not f.subdiff(xq).contains(vq):
        raise InputError("vbar is not a subgradient at xbar")
    m = strat.strata[m_index]
    orbit = set(_orbit_strata(strat, m_index))
    rng = np.random.default_rng(seed)
    t = Fraction(t)

    fn = SpectralFn(f) if lifted else None
    u_lift = random_orthogonal(len(xq), rng) if lifted else None

    def in_target(x_vec: Vec) -> bool:
        if not lifted:
            idx = strat.stratum_of(x_vec)
            return idx is not None and idx in orbit
        xm = SymMatrix(u_lift.entries.T
                       @ np.diag([float(v) for v in x_vec]) @ u_lift.entries)
        e = eig_sym(xm)
        tol = fn.grouping_tol(xm.fro_norm())
        lam_q = _snap_or_none(e.lam, tol)
        if lam_q is not None:
            idx = strat.stratum_of(lam_q)
        else:
            idx = strat.stratum_of_float(e.lam, tol)
        return idx is not None and idx in orbit

    sequences: list[tuple[str, list[Vec]]] = []
    depth = MIN_POST_TAIL + 8
    if generator in ("prox_path", "all"):
        for trial in range(trials):
            d = rng.standard_normal(len(xq))
            d = d / np.linalg.norm(d)
            seqx = []
            for k in range(depth):
                delta = Fraction(float(0.25 * 2.0 ** (-k)))
                z = tuple(xq[i] + t * vq[i] + delta * from_float_exact(d[i])
                          for i in range(len(xq)))
                xk = vector_prox(f, t, z)
                seqx.append(xk)
            sequences.append((f"prox_path[{trial}]", seqx))
    if generator in ("stratum_hop", "adversarial", "all"):
        for j, other in enumerate(strat.strata):
            if j in orbit:
                continue
            eqs, ineqs = other.closure_system(f)
            in_closure = (all(dot(c, xq) == r for c, r in eqs)
                          and all(dot(c, xq) <= r for c, r in ineqs))
            if not in_closure:
                continue
            if not f.subdiff(other.representative).contains(vq):
                continue  # inadmissible: subgradients cannot converge to vbar
            rep = other.representative
            seqx = []
            for k in range(depth):
                s = Fraction(1, 2 ** (k + 1))
                seqx.append(tuple(xq[i] + s * (rep[i] - xq[i])
                                  for i in range(len(xq))))
            sequences.append((f"stratum_hop[{j}]", seqx))

    worst = {"sequence": None, "tail": None, "witness": None}
    passed = True
    identified_any = False
    for name, seqx in sequences:
        flags = [in_target(x) for x in seqx]
        tail = next((k for k in range(len(flags)) if all(flags[k:])), None)
        if tail is not None and len(flags) - tail - 1 >= MIN_POST_TAIL:
            identified_any = True
            if worst["tail"] is None or tail > worst["tail"]:
                worst = {"sequence": name, "tail": tail, "witness": None}
        else:
            passed = False
            bad = next((k for k in range(len(flags)) if not flags[k]), None)
            worst = {"sequence": name, "tail": None,
                     "witness": [float(v) for v in seqx[bad]] if bad is not None
                     else None}
    if expect_admissible_failure:
        passed = (not passed) and bool(sequences)
    details = {"generator": generator, "n_sequences": len(sequences),
               "lifted": lifted, "identified_any": identified_any}
    return ProbeReport("identifiability", passed, worst, len(sequences), seed,
                       details)


# -- partial smoothness ---------------------------------------------------------


def partial_smoothness_check(f: MaxAffineFn, m, xbar=None,
                             *, seed: int = 0) -> ProbeReport:
    """The four conditions at xbar relative to M.

    For a stratification stratum everything is exact: (i) the active pieces
    agree on the affine hull, (ii) the exact prox search is single-valued on
    samples, (iii) para(aff subdiff) equals the normal space of M, (iv) the
    subdifferential is literally constant on the stratum.  For an ad-hoc
    manifold patch (GenPolyhedron closure) the same checks run at sampled
    rational points and can fail, which is how counterexamples are probed.
    """
    if isinstance(m, Stratum):
        closure = m.closure
        rep = m.representative if xbar is None else parse_vector(xbar)
    elif isinstance(m, GenPolyhedron):
        closure = m
        rep = closure.ri_point() if xbar is None else parse_vector(xbar)
    else:
        raise InputError("M must be a Stratum or a GenPolyhedron closure")
    if not f.in_domain(rep):
        raise InputError("xbar outside dom f")

    base, basis = closure.affine_hull()
    n = f.n

    # (i) smoothness: f restricted to M is affine around rep
    sub0 = f.subdiff(rep)
    i_ok = True
    probe_pts: list[Vec] = [rep]
    for v in basis:
        for scale in (Fraction(1, 8), Fraction(-1, 8), Fraction(1, 16)):
            cand = tuple(rep[i] + scale * v[i] for i in range(n))
            if closure.ri_contains(cand) and f.in_domain(cand):
                probe_pts.append(cand)
    for v in basis:
        d8 = tuple(rep[i] + Fraction(1, 8) * v[i] for i in range(n))
        d8m = tuple(rep[i] - Fraction(1, 8) * v[i] for i in range(n))
        if not (f.in_domain(d8) and f.in_domain(d8m)):
            continue
        if f.value(d8) + f.value(d8m) != 2 * f.value(rep):
            i_ok = False

    # (ii) regularity: exact prox single-valued at perturbed anchors
    rng = np.random.default_rng(seed)
    ii_ok = True
    for _ in range(5):
        z = tuple(rep[i] + from_float_exact(float(x) * 0.3)
                  for i, x in enumerate(rng.standard_normal(n)))
        try:
            vector_prox(f, Fraction(1, 2), z)
        except Exception:
            ii_ok = False

    # (iii) sharpness: para(aff subdiff f(rep)) == normal space of M
    _, sub_basis = sub0.affine_hull()
    sub_dirs = list(sub_basis) + list(sub0.rays)
    normal_basis = orthogonal_complement_basis(basis, n)
    iii_ok = same_span(sub_dirs, normal_basis)

    # (iv) continuity: subdifferential constant along M near rep
    iv_ok = True
    for p in probe_pts[1:]:
        if not f.subdiff(p).poly_eq(sub0):
            iv_ok = False
    if isinstance(m, Stratum) and xbar is None:
        # exact statement on the stratum: any representative gives the same set
        other = closure.ri_point()
        if not f.subdiff(other).poly_eq(sub0):
            iv_ok = False

    passed = i_ok and ii_ok and iii_ok and iv_ok
    details = {"smoothness": i_ok, "regularity": ii_ok,
               "sharpness": iii_ok, "continuity": iv_ok}
    worst = {} if passed else {"failed": [k for k, v in details.items() if not v],
                               "at": [str(v) for v in rep]}
    return ProbeReport("partial_smoothness", passed, worst, len(probe_pts),
                       seed, details)


def local_uniqueness_check(f: MaxAffineFn, m1, m2, xbar, radius: float,
                           samples: int = 200, seed: int = 0) -> ProbeReport:
    """Two candidate partly smooth manifolds must coincide near xbar.  If one
    of them fails the partial-smoothness gate the check is vacuous."""
    g1 = partial_smoothness_check(f, m1, xbar)
    g2 = partial_smoothness_check(f, m2, xbar)
    if not (g1.passed and g2.passed):
        return ProbeReport("local_uniqueness", True, {"vacuous": True},
                           0, seed, {"gate": [g1.passed, g2.passed],
                                     "vacuous": True})

    def member(m, x: Vec) -> bool:
        if isinstance(m, Stratum):
            return m.contains(f, x)
        return m.ri_contains(x)

    rng = np.random.default_rng(seed)
    xb = np.asarray(xbar, dtype=float)
    disagreements = 0
    witness = None
    for _ in range(samples):
        y = xb + radius * rng.uniform(-1, 1, size=len(xb))
        yq = _dyadic(y)
        if member(m1, yq) != member(m2, yq):
            disagreements += 1
            witness = y.tolist()
    return ProbeReport("local_uniqueness", disagreements == 0,
                       {"witness": witness, "disagreements": disagreements},
                       samples, seed, {"vacuous": False})


# -- proximal identification runs ------------------------------------------------


def proximal_identification_run(fn: SpectralFn, x0: SymMatrix, t,
                                max_iter: int,
                                fixed_point_tol: float = 1e-12
                                ) -> IdentificationTrace:
    """Iterate X_{k+1} = prox_{tF}(X_k), recording spectra and patterns.

    identified_at is the first index from which every later recorded iterate
    carries the limit pattern; without a fixed-point confirmation at least
    MIN_POST_TAIL trailing iterates are required."""
    records = []
    xk = x0
    fixed = False
    for step in range(max_iter + 1):
        e = eig_sym(xk)
        tol = fn.grouping_tol(xk.fro_norm())
        records.append({
            "step": step,
            "lambda": [float(v) for v in e.lam],
            "pattern": SpectrumPattern.from_values(e.lam, tol),
            "value": spectral_value(fn, xk),
        })
        if step == max_iter:
            break
        xnext = spectral_prox(fn, t, xk)
        if float(np.linalg.norm(xnext.entries - xk.entries, "fro")) \
                <= fixed_point_tol:
            fixed = True
            xk = xnext
            break
        xk = xnext
    limit = records[-1]["pattern"]
    tail = None
    for k in range(len(records)):
        if all(r["pattern"] == limit for r in records[k:]):
            tail = k
            break
    if tail is None:
        identified = None
    elif fixed or (len(records) - tail - 1 >= MIN_POST_TAIL):
        identified = tail
    else:
        identified = None
    return IdentificationTrace(records, identified)


def scalar_soft_threshold_trace(values, t: float, max_iter: int,
                                tol: float) -> SpectrumPattern:
    """Oracle for the l1 proximal run: iterate coordinatewise soft
    thresholding and return the limit pattern."""
    x = np.asarray(values, dtype=float)
    for _ in range(max_iter):
        xn = np.sign(x) * np.maximum(np.abs(x) - t, 0.0)
        if np.linalg.norm(xn - x) <= 1e-12:
            x = xn
            break
        x = xn
    return SpectrumPattern.from_values(x, tol)


# -- conjugate grid oracle --------------------------------------------------------


GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(g: Callable[[float], float], lo: float, hi: float,
                iters: int = 80) -> tuple[float, float]:
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = g(d)
    xm = (a + b) / 2
    return xm, g(xm)


def numeric_conjugate(f: Callable[[np.ndarray], float], y,
                      grid: tuple[float, float, int] = (-6.0, 6.0, 41),
                      refine_iters: int = 4) -> float:
    """sup <x,y> - f(x) by grid scan plus cyclic golden-section refinement.

    Raises InconclusiveError when the grid maximum sits on the box boundary
    (then the box did not capture the supremum)."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    lo, hi, npts = grid
    axis = np.linspace(lo, hi, npts)

    def g(x: np.ndarray) -> float:
        return float(x @ y) - float(f(x))

    best_x, best_v = None, -INF
    for combo in itertools.product(range(npts), repeat=n):
        x = axis[list(combo)]
        v = g(x)
        if v > best_v:
            best_x, best_v = x.copy(), v
    if any(i in (0, npts - 1) for i in
           [int(np.argmin(np.abs(axis - c))) for c in best_x]):
        if any(abs(c - lo) < 1e-12 or abs(c - hi) < 1e-12 for c in best_x):
            raise InconclusiveError(
                "grid maximum attained on the box boundary")
    h = axis[1] - axis[0]
    x = best_x.copy()
    for _ in range(refine_iters):
        for i in range(n):
            def gi(s: float, i=i) -> float:
                z = x.copy()
                z[i] = s
                return g(z)
            x[i], _ = _golden_max(gi, x[i] - h, x[i] + h)
        h *= 0.5
    return max(best_v, g(x))


# -- brute-force distance oracle ---------------------------------------------------


def orbit_distance_samples(q: VectorSet, x: SymMatrix, n_samples: int,
                           seed: int, include_aligned: bool = True
                           ) -> list[float]:
    """Sampled upper bounds on d_{lambda^{-1}(Q)}(X): for each sampled U, the
    best approximation with eigenbasis U is offdiag mass plus the vector
    distance of the rotated diagonal.  The aligned candidate (X's own
    eigenbasis) is included so the sampled minimum attains the transfer
    value."""
    rng = np.random.default_rng(seed)
    n = x.n
    out: list[float] = []
    us = []
    if include_aligned:
        us.append(eig_sym(x).U.entries)
    while len(us) < n_samples:
        us.append(random_orthogonal(n, rng).entries)
    for u in us:
        rot = u @ x.entries @ u.T
        diag = np.diag(rot).copy()
        od = rot.copy()
        np.fill_diagonal(od, 0.0)
        off2 = float((od * od).sum())
        dvec = q.distance(_dyadic(diag))
        out.append(math.sqrt(off2 + dvec * dvec))
    return out
