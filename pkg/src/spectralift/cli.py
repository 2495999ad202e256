"""Command-line front end: eig, stratify, prox-path, verify.

JSON in, JSON out.  Exit codes: 0 success / all probes pass, 1 verification
failure, 2 input error, 3 budget exhausted.  Identical config + seed gives
byte-identical output once --no-timestamp is set; every numeric result is
accompanied by the tolerance it was computed under.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import corpus
from .errors import BudgetExceededError, InputError, SpectraliftError
from .idlab import (identifiability_test, moreau_gradient_check,
                    orbit_distance_samples, partial_smoothness_check,
                    projection_derivative_check, prox_regularity_probe,
                    proximal_identification_run)
from .lift import (SpectralFn, lift_stratification, spectral_distance)
from .matdecomp import SymMatrix, eig_sym
from .polyfun import MaxAffineFn, conjugate_stratification, stratify
from .rationals import parse_vector
from .symmetry import local_symmetry_probe
from .vsets import VectorSet

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _load_json_arg(text: str):
    """Inline JSON (starts with '[' or '{') or a path to a JSON file."""
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        return json.loads(stripped)
    path = Path(text)
    if not path.exists():
        raise InputError(f"no such file: {text}")
    return json.loads(path.read_text())


def _load_matrix(text: str) -> SymMatrix:
    data = _load_json_arg(text)
    if isinstance(data, dict):
        data = data.get("matrix", data)
    return SymMatrix(data)


def _named_function(spec) -> MaxAffineFn:
    if isinstance(spec, dict):
        return MaxAffineFn.from_json(spec)
    if isinstance(spec, str) and ":" in spec:
        kind, _, num = spec.partition(":")
        n = int(num)
        table = {"ell1": corpus.ell1, "fmax": corpus.f_max,
                 "neg_orthant_indicator": corpus.neg_orthant_indicator,
                 "box_indicator": corpus.box_indicator,
                 "linf": corpus.linf_norm, "ell1_signed": corpus.ell1_signed}
        if kind in table:
            return table[kind](n)
    if isinstance(spec, str):
        return MaxAffineFn.from_json(_load_json_arg(spec))
    raise InputError(f"cannot resolve function spec {spec!r}")


def _named_set(spec) -> VectorSet:
    if isinstance(spec, str) and ":" in spec:
        kind, _, num = spec.partition(":")
        n = int(num)
        table = {"neg_orthant": corpus.neg_orthant_set, "box": corpus.box_set,
                 "halfspace": corpus.sym_halfspace_set,
                 "polygon": corpus.polygon_point_set,
                 "axis_line": corpus.axis_line_set}
        if kind in table:
            return table[kind](n)
    if spec == "two_points":
        return corpus.two_point_set()
    raise InputError(f"cannot resolve set spec {spec!r}")


def _spectral_function(spec) -> SpectralFn:
    data = spec
    if isinstance(spec, str) and (
            spec.strip().startswith("{")
            or (len(spec) < 4096 and Path(spec).exists())):
        data = _load_json_arg(spec)
    if isinstance(data, dict) and "kind" in data:
        if "function_file" in data:
            base = MaxAffineFn.from_json(_load_json_arg(data["function_file"]))
        else:
            base = MaxAffineFn.from_json(data["base"])
        return SpectralFn(base, data["kind"])
    return SpectralFn(_named_function(data))


def _emit(payload: dict, args) -> None:
    if not args.no_timestamp:
        payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_eig(args) -> int:
    x = _load_matrix(args.matrix)
    e = eig_sym(x)
    residual = e.residual(x)
    payload = {
        "lambda": [float(v) for v in e.lam],
        "U": [[float(v) for v in row] for row in e.U.entries],
        "residual": residual,
        "tolerances": {
            "residual_bound": 1e-10 * (1.0 + x.fro_norm()),
            "orthogonality": 1e-10,
            "grouping": args.tol_grouping,
        },
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_stratify(args) -> int:
    f = _named_function(_load_json_arg(args.function)
                        if not (isinstance(args.function, str)
                                and ":" in args.function)
                        else args.function)
    strat = stratify(f)
    dual = conjugate_stratification(f, strat)
    payload = strat.to_json()
    payload["duality_pairing"] = dual.pairing_table()
    payload["dual_strata"] = [d.to_json() for d in dual.dual_strata]
    if f.symmetry_mode == "permutation":
        lifted = lift_stratification(SpectralFn(f), strat)
        payload["lifted"] = [ls.to_json() for ls in lifted.lifted]
    if args.vector:
        v = parse_vector(_load_json_arg(args.vector))
        idx = strat.stratum_of(v)
        payload["query"] = {
            "vector": [str(t) for t in v],
            "stratum": idx,
            "orbit": (None if idx is None
                      else next(k for k, o in enumerate(strat.sym_orbits)
                                if idx in o)),
        }
    payload["tolerances"] = {"arithmetic": "exact rational",
                             "grouping": args.tol_grouping}
    _emit(payload, args)
    return EXIT_OK


def cmd_prox_path(args) -> int:
    fn = _spectral_function(args.function)
    x0 = _load_matrix(args.matrix)
    trace = proximal_identification_run(fn, x0, Fraction(args.t), args.max_iter)
    payload = trace.to_json()
    payload["tolerances"] = {
        "fixed_point": 1e-12,
        "grouping_factor": fn.grouping_factor,
        "t": args.t,
    }
    payload["seed"] = args.seed
    _emit(payload, args)
    return EXIT_OK


DEFAULT_SUITE = {
    "probes": [
        {"probe": "moreau_gradient", "set": "neg_orthant:2",
         "point": [1.0, -2.0], "seed": 1},
        {"probe": "moreau_gradient", "set": "box:2",
         "point": [1.7, 0.4], "seed": 2},
        {"probe": "projection_derivative", "set": "neg_orthant:2",
         "point": [0.0, -1.0], "seed": 3},
        {"probe": "projection_derivative", "set": "axis_line:2",
         "point": [0.0, 0.0], "seed": 4},
        {"probe": "prox_regularity", "set": "box:2", "point": [0.5, 0.5],
         "params": {"radius": 0.4, "trials": 40}, "seed": 5},
        {"probe": "prox_regularity", "set": "two_points", "point": [1.0],
         "params": {"radius": 0.5, "trials": 40}, "seed": 6},
        {"probe": "local_symmetry", "function": "ell1:3",
         "point": [1.0, 1.0, 0.0],
         "params": {"radius": 0.3, "trials": 30}, "seed": 7},
        {"probe": "partial_smoothness", "function": "ell1:2",
         "point": [1, 0], "seed": 8},
        {"probe": "distance_transfer", "set": "neg_orthant:2",
         "matrix": [[0.3, 0.9], [0.9, -1.1]],
         "params": {"samples": 60}, "seed": 9},
    ]
}


def _run_probe(entry: dict):
    probe = entry["probe"]
    seed = entry.get("seed", 0)
    params = entry.get("params", {})
    if probe == "moreau_gradient":
        return moreau_gradient_check(_named_set(entry["set"]), entry["point"],
                                     **params)
    if probe == "projection_derivative":
        return projection_derivative_check(_named_set(entry["set"]),
                                           entry["point"], **params)
    if probe == "prox_regularity":
        return prox_regularity_probe(
            _named_set(entry["set"]), entry["point"],
            params.get("radius", 0.5), params.get("trials", 50), seed,
            spectral=params.get("spectral", False))
    if probe == "local_symmetry":
        f = _named_function(entry["function"])
        return local_symmetry_probe(
            lambda x: f.value_float(x, 1e-9), entry["point"],
            params.get("radius", 0.3), params.get("trials", 30), seed)
    if probe == "partial_smoothness":
        f = _named_function(entry["function"])
        strat = stratify(f)
        idx = strat.stratum_of(parse_vector(entry["point"]))
        if idx is None:
            raise InputError("point not in dom f")
        return partial_smoothness_check(f, strat.strata[idx], seed=seed)
    if probe == "identifiability":
        f = _named_function(entry["function"])
        strat = stratify(f)
        idx = strat.stratum_of(parse_vector(entry["point"]))
        if idx is None:
            raise InputError("point not in dom f")
        return identifiability_test(
            f, strat, idx, entry["point"], entry["subgradient"],
            params.get("generator", "all"), params.get("trials", 3), seed,
            lifted=params.get("lifted", False))
    if probe == "distance_transfer":
        q = _named_set(entry["set"])
        x = SymMatrix(entry["matrix"])
        samples = orbit_distance_samples(q, x, params.get("samples", 50), seed)
        lib = spectral_distance(q, x)
        ok = (lib <= min(samples) + 1e-9
              and abs(lib - min(samples)) <= 1e-5)
        from .reports import ProbeReport
        return ProbeReport("distance_transfer", ok,
                           {"library": lib, "sampled_min": min(samples),
                            "threshold": 1e-5},
                           len(samples), seed)
    raise InputError(f"unknown probe {probe!r}")


def cmd_verify(args) -> int:
    suite = _load_json_arg(args.suite) if args.suite else DEFAULT_SUITE
    probes = suite.get("probes", [])
    reports = []
    for k, entry in enumerate(probes):
        rep = _run_probe(entry)
        record = rep.to_json()
        record["name"] = entry.get("name", f"{rep.name}[{k}]")
        record["expected_pass"] = entry.get("expected_pass", True)
        reports.append(record)
    reports.sort(key=lambda r: r["name"])
    all_ok = all(r["pass"] == r["expected_pass"] for r in reports)
    payload = {
        "reports": reports,
        "all_pass": all_ok,
        "tolerances": {"grouping": args.tol_grouping},
    }
    _emit(payload, args)
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spectralift",
        description="Spectral lifts of symmetric polyhedral analysis: "
                    "eigendecomposition, stratification duality, proximal "
                    "identification paths, and verification probes.")
    ap.add_argument("--out", help="write JSON output to this path")
    ap.add_argument("--no-timestamp", action="store_true",
                    help="omit the timestamp field (byte-stable output)")
    ap.add_argument("--tol.grouping", dest="tol_grouping", type=float,
                    default=1e-8, help="eigenvalue tie-grouping tolerance")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for stochastic commands")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="symmetric eigendecomposition")
    p.add_argument("--matrix", required=True,
                   help="inline JSON rows or path (rows of a square "
                        "symmetric matrix); for SVD of an n<m matrix pass "
                        "the transpose")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("stratify",
                       help="stratification + duality pairing of a "
                            "polyhedral function")
    p.add_argument("--function", required=True,
                   help="function JSON file, inline JSON, or name like "
                        "'ell1:2'")
    p.add_argument("--vector", help="optional query point (inline JSON or "
                                    "path, rational strings allowed); the "
                                    "containing stratum is reported")
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("prox-path", help="proximal identification run")
    p.add_argument("--function", required=True)
    p.add_argument("--matrix", required=True, help="start matrix X0")
    p.add_argument("--t", type=float, default=0.5, help="prox parameter")
    p.add_argument("--max-iter", type=int, default=50)
    p.set_defaults(func=cmd_prox_path)

    p = sub.add_parser("verify", help="run a probe suite (default: shipped)")
    p.add_argument("--suite", help="suite JSON file (omit for the default)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, SpectraliftError, json.JSONDecodeError, OSError,
            ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
