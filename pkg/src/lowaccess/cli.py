"""Command-line entry point: ``lowaccess <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity error.
``LOWACCESS_ENUM_BOUND`` overrides the p**m enumeration cap.

Randomness in ``simulate`` comes from one integer seed: trial j draws from
``numpy.random.Generator(PCG64(SeedSequence(seed).spawn(trials)[j]))``, so a
trace is reproducible across platforms and independent of trial order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import constructions as cons
from .complexity import CoefficientSet, p_complexity, universal_protocol
from .errors import CapacityError, LowAccessError, RadiusBoundViolation
from .gf_codes import (
    CoveringCode,
    covering_radius,
    format_code,
    is_acceptable,
    norm,
    parse_code,
    slices_nonempty,
)
from .protocol import (
    Progression,
    encode,
    exact_dot,
    query,
    reduced_scheme,
    shift_protocol,
    symmetric_set,
    trace_record,
    values_match,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

CSV_FIELDS = (
    "construction", "m", "code_size", "tilde_size", "r",
    "alpha_num", "alpha_den", "beta_num", "beta_den", "alpha_dec", "beta_dec", "theorem",
)
DEFAULT_RANGES = {"entire_space": (1, 3), "repetition": (1, 12), "amalgam": (1, 8)}
FAMILY_ORDER = ("entire_space", "repetition", "hamming_3", "expanded_hamming", "amalgam")


class UsageError(LowAccessError):
    pass


class VerificationFailure(LowAccessError):
    pass


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split("..", 1))
    except ValueError as exc:
        raise UsageError(f"--i-range must look like 'a..b', got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise UsageError(f"invalid range {text!r}")
    return lo, hi


def _load_code(args) -> tuple[str, CoveringCode]:
    if getattr(args, "code_file", None):
        text = Path(args.code_file).read_text()
        return Path(args.code_file).name, parse_code(text)
    if not getattr(args, "catalog", None):
        raise UsageError("give --catalog NAME or --code-file PATH")
    return cons.catalog_label(args.catalog, args.i), cons.catalog(args.catalog, args.i)


# -- radius / reduce / catalog -------------------------------------------------


def cmd_radius(args) -> int:
    label, code = _load_code(args)
    r = covering_radius(code)
    coords = []
    for i in range(1, code.m + 1):
        if slices_nonempty(code, i):
            n = norm(code, i)
            coords.append({"coordinate": i, "norm": n, "acceptable": is_acceptable(code, i)})
        else:
            coords.append({"coordinate": i, "norm": None, "acceptable": False})
    report = {
        "code": label, "p": code.p, "m": code.m, "size": len(code), "r": r,
        "normal": any(c["acceptable"] for c in coords),
        "acceptable_coordinates": [c["coordinate"] for c in coords if c["acceptable"]],
        "coordinates": coords,
    }
    if args.format == "json":
        print(json.dumps(report))
    else:
        print(f"code={label} p={code.p} m={code.m} size={len(code)} r={r} normal={str(report['normal']).lower()}")
        for c in coords:
            norm_txt = "undefined" if c["norm"] is None else c["norm"]
            print(f"  coordinate {c['coordinate']}: norm={norm_txt} acceptable={str(c['acceptable']).lower()}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    label, code = _load_code(args)
    reduced = cons.reduce_code(code)
    report = {
        "code": label, "size": len(code), "low_weight": len(reduced.low_weight),
        "tilde_size": len(reduced), "kept": ["".join(map(str, w)) for w in reduced.kept],
    }
    if args.format == "json":
        print(json.dumps(report))
    else:
        print(f"code={label} size={len(code)} low_weight={report['low_weight']} tilde_size={len(reduced)}")
        for w in report["kept"]:
            print(f"  {w}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.name is None:
        for name in cons.CATALOG_NAMES:
            print(f"{name} (needs --i)" if name in cons.PARAMETRIC else name)
        return EXIT_OK
    code = cons.catalog(args.name, args.i)
    sys.stdout.write(f"# {cons.catalog_label(args.name, args.i)}\n" + format_code(code))
    return EXIT_OK


# -- tradeoff ------------------------------------------------------------------


def _row(construction: str, m, size, tilde, r, alpha: Fraction, beta: Fraction, theorem: str) -> dict:
    return {
        "construction": construction, "m": m, "code_size": size, "tilde_size": tilde, "r": r,
        "alpha_num": alpha.numerator, "alpha_den": alpha.denominator,
        "beta_num": beta.numerator, "beta_den": beta.denominator,
        "alpha_dec": f"{float(alpha):.6f}", "beta_dec": f"{float(beta):.6f}", "theorem": theorem,
    }


def tradeoff_rows(family: str, i_range: tuple[int, int] | None, scheme: str = "reduced",
                  limits: bool = True) -> list[dict]:
    families = FAMILY_ORDER if family == "all" else (family,)
    rows = []
    for fam in families:
        if fam not in cons.CATALOG_NAMES:
            raise UsageError(f"unknown family {fam!r}")
        if fam in cons.PARAMETRIC:
            lo, hi = i_range or DEFAULT_RANGES[fam]
            params: list[int | None] = list(range(lo, hi + 1))
        else:
            params = [None]
        for i in params:
            code = cons.catalog(fam, i)
            pair = cons.feasible_pair(code, scheme)
            tilde = len(cons.reduce_code(code)) if scheme == "reduced" else len(code)
            theorem = "Thm2/Cor1" if scheme == "reduced" else "Thm1"
            rows.append(_row(cons.catalog_label(fam, i), code.m, len(code), tilde,
                             covering_radius(code), pair.alpha, pair.beta, theorem))
        if fam == "repetition" and limits and scheme == "reduced":
            # m -> infinity with one stored column: alpha -> 1, radius/m -> (p-1)/p
            p = cons.repetition(1).p
            rows.append(_row("repetition(limit)", "", len(cons.repetition(2)), "", "",
                             Fraction(1), Fraction(p - 1, p), "limit"))
    return rows


def lower_envelope(rows: list[dict]) -> list[dict]:
    """Midpoints of the edges of the lower convex hull of the (alpha, beta) points."""
    pts = sorted({(Fraction(r["alpha_num"], r["alpha_den"]), Fraction(r["beta_num"], r["beta_den"]))
                  for r in rows})
    hull: list[tuple[Fraction, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    # keep only the part where beta decreases as alpha grows
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if y2 < y1:
            out.append(_row("interpolated", "", "", "", "", (x1 + x2) / 2, (y1 + y2) / 2, "interpolated"))
    return out


def cmd_tradeoff(args) -> int:
    i_range = _parse_range(args.i_range) if args.i_range else None
    rows = tradeoff_rows(args.family, i_range, args.scheme)
    if args.envelope:
        rows += lower_envelope(rows)
    if args.format == "json":
        print(json.dumps(rows, indent=None))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# -- simulate ------------------------------------------------------------------


def choose_route(coeffs: CoefficientSet, p: int) -> str:
    if tuple(coeffs.elements) == tuple(Fraction(v) for v in symmetric_set(p)):
        return "thm2"
    if len(coeffs) == p:
        try:
            Progression.from_elements(coeffs.elements)
            return "prop1"
        except LowAccessError:
            pass
    return "thm3"


def build_storage(code: CoveringCode, x, route: str):
    """Storage for one trial. Only the all-ones node depends on the route."""
    return encode(x, reduced_scheme(cons.reduce_code(code)), ones_node=route != "thm2")


def simulate(code: CoveringCode, label: str, k: int, coeffs: CoefficientSet, trials: int, seed: int,
             *, float_data: bool = False, budget: int = 1_000_000):
    """Run ``trials`` random queries; returns (summary dict, trace records)."""
    p = code.p
    route = choose_route(coeffs, p)
    columns = len(cons.reduce_code(code))
    r = covering_radius(code)
    theta, dec, progression = 1, None, None
    if route == "prop1":
        progression = Progression.from_elements(coeffs.elements)
    elif route == "thm3":
        result = p_complexity(coeffs, p, budget)
        theta, dec = result.theta, result.witness
    t = -(-k // code.m)
    bound = theta * t * (r + 1) + (0 if route == "thm2" else 1)

    elements = list(coeffs.elements)
    children = np.random.SeedSequence(seed).spawn(trials)
    records, failures = [], []
    for qid, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        x = rng.standard_normal(k) * 100 if float_data else rng.integers(-1000, 1001, size=k).astype(float)
        w = [elements[j] for j in rng.integers(0, len(elements), size=k)]
        storage = build_storage(code, x, route)
        if route == "thm2":
            answer = query([float(v) for v in w], storage)
        elif route == "prop1":
            answer = shift_protocol(w, storage, progression)
        else:
            answer = universal_protocol(w, storage, dec, coeffs)
        oracle = float(exact_dot(w, x))
        rec = trace_record(qid, storage, answer, oracle)
        records.append(rec)
        if not rec["match"] or answer.ell > bound:
            failures.append({"query_id": qid, "w": [str(v) for v in w], "nodes": sorted(answer.nodes),
                             "result": answer.value, "oracle": oracle, "ell": answer.ell})

    ells = [rec["ell"] for rec in records]
    summary = {
        "construction": label, "route": route, "p": p, "m": code.m, "r": r, "k": k, "t": t,
        "n": t * (code.m + columns), "theta": theta,
        "coefficient_set": [str(e) for e in elements],
        "trials": trials, "seed": seed, "matches": sum(rec["match"] for rec in records),
        "max_ell": max(ells) if ells else 0, "mean_ell": (sum(ells) / len(ells)) if ells else 0.0,
        "ell_bound": bound,
        "measured_beta": (max(ells) / k) if ells else 0.0,
        "theory_beta": float(Fraction(theta * (r + 1), code.m)),
        "failures": failures,
    }
    if dec is not None:
        summary["witness"] = dec.to_json()
    return summary, records


def cmd_simulate(args) -> int:
    label, code = _load_code(args)
    if args.k < 1 or args.trials < 1:
        raise UsageError("--k and --trials must be positive")
    coeffs = CoefficientSet.parse(args.coeff_set)
    summary, records = simulate(code, label, args.k, coeffs, args.trials, args.seed,
                                float_data=args.float_data, budget=args.budget)
    if args.trace:
        lines = "".join(json.dumps(rec) + "\n" for rec in records)
        if args.trace == "-":
            sys.stdout.write(lines)
        else:
            Path(args.trace).write_text(lines)
    print(json.dumps(summary))
    if summary["failures"]:
        first = summary["failures"][0]
        print(f"verification failed on query {first['query_id']}: w={first['w']} nodes={first['nodes']} "
              f"result={first['result']} oracle={first['oracle']}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# -- complexity ----------------------------------------------------------------


def cmd_complexity(args) -> int:
    coeffs = CoefficientSet.parse(args.set)
    result = p_complexity(coeffs, args.p, args.budget, max_denominator=args.max_denominator)
    print(json.dumps(result.to_json()))
    return EXIT_OK


# -- wiring --------------------------------------------------------------------


def _add_code_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--catalog", choices=cons.CATALOG_NAMES, help="catalog code name")
    parser.add_argument("--i", type=int, default=None, help="parameter of parametric catalog codes")
    parser.add_argument("--code-file", help="code in the 'p m' + digit-rows text format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowaccess", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", help="covering radius, norms and normality of a code")
    _add_code_source(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("reduce", help="sign-reduced stored codeword set")
    _add_code_source(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("catalog", help="list catalog codes or print one in code-file format")
    p.add_argument("name", nargs="?", choices=cons.CATALOG_NAMES)
    p.add_argument("--i", type=int, default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("tradeoff", help="feasible (alpha, beta) table for catalog families")
    p.add_argument("--family", default="all", choices=("all", *cons.CATALOG_NAMES))
    p.add_argument("--i-range", default=None, help="a..b for parametric families")
    p.add_argument("--scheme", choices=("reduced", "generic"), default="reduced")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--envelope", action="store_true", help="add interpolated lower-envelope points")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("simulate", help="random queries checked against an exact oracle")
    _add_code_source(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--coeff-set", required=True, help='e.g. "-1,0,1", "2,5,8", "0..8"')
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, help="write JSON-lines trace to PATH ('-' for stdout)")
    p.add_argument("--float-data", action="store_true", help="Gaussian data instead of integers")
    p.add_argument("--budget", type=int, default=1_000_000, help="complexity search leaf budget")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("complexity", help="p-complexity witness of a coefficient set")
    p.add_argument("--set", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--max-denominator", type=int, default=2)
    p.set_defaults(func=cmd_complexity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (VerificationFailure, RadiusBoundViolation) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (LowAccessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
