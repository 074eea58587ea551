"""``tentlim`` command line.

Every subcommand builds a JSON-ready payload; the output format decides how it
is written. Exit status: 0 success, 1 a verification failed, 2 usage error,
3 an interval comparison ran out of precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .arcs import arc_A, salient_position, verify_arc_lattice
from .chains import natural_chain, smallest_k_below, verify_completeness
from .errors import NoEpsilonFound, NotFound, PrecisionExhausted, TentlimError
from .folding import (
    is_symmetric_pattern,
    k_pattern,
    pl_restrict,
    realize_pattern,
    turning_points,
    verify_adjacent_images,
)
from .invariants import count_levels, distinguish, invariant_sequence
from .numerics import default_precision, parse_scalar, scalar_to_json, to_float
from .plotting import Table, render, tables_to_text
from .symmetry import is_eps_symmetric, lemma12_cases, verify_lemma12, verify_no_symmetry
from .tentmap import TentMap, critical_orbit, delta_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- configuration ------------------------------------------------------------

_INT_KEYS = {
    "depth", "max_i", "max_n", "max_depth", "max_j", "grid", "precision_bits", "jobs",
    "k", "D", "i", "n", "K", "level", "delta_depth",
}
_BOOL_KEYS = {"closed"}
DEFAULTS = {
    "depth": 20,
    "max_i": 20,
    "max_n": 12,
    "max_depth": 40,
    "max_j": 6,
    "grid": 200,
    "delta_depth": 20,
    "format": "json",
    "jobs": 1,
    "suite": "lemmas",
    "i": 1,
    "k": None,
    "closed": False,
}


def read_config(path: str) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are ignored. Dashes in keys become underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in _INT_KEYS:
        try:
            v = int(value)
        except ValueError as exc:
            raise UsageError(f"{key} must be an integer, got {value!r}") from exc
        return v
    if key in _BOOL_KEYS:
        return value.lower() in ("1", "true", "yes", "on")
    return value


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    values = vars(args)
    for key, value in cfg.items():
        if values.get(key) is None:
            values[key] = value
    for key, value in DEFAULTS.items():
        if values.get(key) is None:
            values[key] = value
    for key in list(values):
        values[key] = _coerce(key, values[key])
    for key in _INT_KEYS:
        v = values.get(key)
        if isinstance(v, int) and key not in ("i", "k") and v <= 0:
            raise UsageError(f"{key} must be positive")
    if values.get("precision_bits") is None:
        values["precision_bits"] = default_precision()
    return args


def _scalar(args, key: str, required: bool = True):
    text = getattr(args, key, None)
    if text is None:
        if required:
            raise UsageError(f"--{key.replace('_', '-')} is required")
        return None
    return parse_scalar(str(text), args.precision_bits)


def _map(args, key: str = "slope") -> TentMap:
    return TentMap(_scalar(args, key))


def _window(args, tmap: TentMap) -> tuple:
    lo = _scalar(args, "lo", required=False)
    hi = _scalar(args, "hi", required=False)
    core = tmap.core
    return (core[0] if lo is None else lo, core[1] if hi is None else hi)


def _need(args, key: str):
    v = getattr(args, key, None)
    if v is None:
        raise UsageError(f"--{key.replace('_', '-')} is required")
    return v


# -- plot tables --------------------------------------------------------------


def _graph(name: str, f) -> Table:
    return Table(name, "x", "T^n(x)", tuple((to_float(x), to_float(y)) for x, y in zip(f.breakpoints, f.values)))


# -- subcommands ----------------------------------------------------------------


def cmd_orbit(args):
    tmap = _map(args)
    orbit = critical_orbit(tmap, args.depth)
    table = Table("critical orbit", "i", "c_i", tuple((i, to_float(p)) for i, p in enumerate(orbit.points, 1)), "points")
    return orbit.to_json(), [table], True


def cmd_kappa(args):
    return {"kappa": critical_orbit(_map(args), max(3, args.depth)).kappa}, None, True


def cmd_delta(args):
    value, cert = delta_bound(_map(args), args.depth)
    return {"delta": scalar_to_json(value), "certificate": cert.to_json()}, None, True


def cmd_pattern(args):
    tmap = _map(args)
    n = _need(args, "n")
    J = _window(args, tmap)
    P = k_pattern(tmap, n, J)
    tps = turning_points(tmap, n, J) if n >= 1 else []
    payload = {
        "n": n,
        "window": [scalar_to_json(J[0]), scalar_to_json(J[1])],
        "pattern": list(P),
        "symmetric": is_symmetric_pattern(P),
        "turning_points": [{"position": scalar_to_json(t.position), "m": t.m} for t in tps],
    }
    return payload, [_graph(f"T^{n} on the window", pl_restrict(tmap, n, J))], True


def _parse_levels(text: str) -> tuple:
    try:
        levels = tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError as exc:
        raise UsageError(f"pattern must be comma-separated integers, got {text!r}") from exc
    if not levels or min(levels) < 1:
        raise UsageError("pattern needs positive levels")
    return levels


def cmd_realize(args):
    tmap = _map(args)
    P = _parse_levels(_need(args, "pattern"))
    found = realize_pattern(tmap, P, args.max_n)
    if found is None:
        return {"pattern": list(P), "result": None}, None, True
    n, J = found
    payload = {"pattern": list(P), "result": {"n": n, "window": [scalar_to_json(J[0]), scalar_to_json(J[1])]}}
    return payload, [_graph(f"T^{n} realizing {P}", pl_restrict(tmap, n, J))], True


def cmd_arcs(args):
    tmap = _map(args)
    i, k = args.i, args.k or 0
    if i < 1:
        raise UsageError("--i must be at least 1")
    arc = arc_A(tmap, i, k)
    depth = k + i
    payload = {
        "arc": arc.to_json(),
        "pattern": list(k_pattern(tmap, i, arc.J)),
        "salient": [{"i": m, "position": scalar_to_json(salient_position(tmap, m, depth))} for m in range(1, depth + 1)],
    }
    return payload, [_graph(f"T^{i} on A_{i}", pl_restrict(tmap, i, arc.J))], True


def cmd_chain(args):
    tmap = _map(args)
    chain = natural_chain(tmap, args.k or 0)
    payload = dict(chain.to_json(), links=chain.n_links)
    pts = (chain.lo,) + chain.boundaries + (chain.hi,)
    table = Table(f"C_{chain.k} link boundaries", "index", "position", tuple((j, to_float(p)) for j, p in enumerate(pts)), "points")
    return payload, [table], True


def cmd_symmetry(args):
    tmap = _map(args)
    n = _need(args, "n")
    J = _window(args, tmap)
    eps = _scalar(args, "eps")
    center = _scalar(args, "center", required=False)
    f = pl_restrict(tmap, n, J)
    res = is_eps_symmetric(f, eps, center)
    payload = dict(res.to_json(), n=n, window=[scalar_to_json(J[0]), scalar_to_json(J[1])])
    payload["center"] = scalar_to_json(center) if center is not None else None
    tables = [_graph(f"T^{n} on the window", f), _graph("reflected", f.reversed())]
    return payload, tables, True


def cmd_invariant(args):
    tmap = _map(args)
    seq = invariant_sequence(tmap, args.max_depth)
    table = Table("pattern length", "n", "length", tuple((e.n, e.pattern.length) for e in seq.entries), "points")
    return seq.to_json(), [table], True


def cmd_distinguish(args):
    s1 = _map(args, "slope")
    s2 = _map(args, "slope2")
    res = distinguish(s1, s2, args.max_depth)
    return {"result": None if res is None else {"n": res[0], "reason": res[1]}}, None, True


def cmd_count(args):
    tmap = _map(args)
    K = _need(args, "K")
    level = _need(args, "level")
    n = count_levels(tmap, K, level, closed=args.closed)
    return {"K": K, "level": level, "closed": bool(args.closed), "count": n}, None, True


# -- verify suites --------------------------------------------------------------


def _case_adjacent(slope_text: str, bits: int, n: int) -> dict:
    tmap = TentMap(parse_scalar(slope_text, bits))
    bad = verify_adjacent_images(tmap, n)
    return {"n": n, "violations": [v.to_json() for v in bad]}


def _case_lattice(slope_text: str, bits: int, max_i: int) -> dict:
    tmap = TentMap(parse_scalar(slope_text, bits))
    return verify_arc_lattice(tmap, max_i).to_json()


def _case_lemma12(slope_text: str, bits: int, eps_text: str, i: int, j: int, ab: tuple) -> dict:
    tmap = TentMap(parse_scalar(slope_text, bits))
    eps = parse_scalar(eps_text, bits)
    entry = {"i": i, "j": j, "ab": list(ab)}
    try:
        k, Jp = verify_lemma12(tmap, eps, i, j, tuple(parse_scalar(x, bits) for x in ab))
    except NotFound as exc:
        entry.update(result=None, error=str(exc), **{"pass": False})
        return entry
    entry.update(result={"k": k, "Jp": [scalar_to_json(Jp[0]), scalar_to_json(Jp[1])]}, **{"pass": True})
    return entry


def _fan_out(jobs: int, fn: Callable, cases: list[tuple]) -> list:
    """Run ``fn(*case)`` for every case; results come back in case order."""
    if jobs <= 1 or len(cases) <= 1:
        return [fn(*c) for c in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, *c) for c in cases]
        return [f.result() for f in futures]


def _eps_default(args, tmap: TentMap):
    eps = _scalar(args, "eps", required=False)
    if eps is None:
        eps = delta_bound(tmap, args.delta_depth)[0]
    return eps


def verify_lemmas(args) -> tuple[dict, bool]:
    slope = str(_need(args, "slope"))
    _map(args)
    cases = [(_case_adjacent, (slope, args.precision_bits, n)) for n in range(2, args.max_n + 1)]
    cases.append((_case_lattice, (slope, args.precision_bits, args.max_i)))
    results = _fan_out(args.jobs, _dispatch, [(fn, c) for fn, c in cases])
    adjacent, lattice = results[:-1], results[-1]
    ok = all(not r["violations"] for r in adjacent) and lattice["pass"]
    return {"suite": "lemmas", "adjacent_images": adjacent, "arc_lattice": lattice, "pass": ok}, ok


def _dispatch(fn, case):
    return fn(*case)


def verify_completeness_suite(args) -> tuple[dict, bool]:
    tmap = _map(args)
    if args.k is not None:
        chain = natural_chain(tmap, args.k)
        eps = _scalar(args, "eps", required=False)
    else:
        eps = _eps_default(args, tmap)
        chain = smallest_k_below(tmap, eps)
    k = chain.k
    D = args.D if args.D is not None else k + 10
    mids = None
    if getattr(args, "midpoints", None):
        mids = [int(v) for v in str(args.midpoints).split(",") if v]
    rep = verify_completeness(tmap, k, D, midpoint_indices=mids)
    payload = dict(rep.to_json(), suite="completeness", eps=scalar_to_json(eps) if eps is not None else None)
    return payload, rep.passed


def verify_symmetry_suite(args) -> tuple[dict, bool]:
    tmap = _map(args)
    delta = delta_bound(tmap, args.delta_depth)[0]
    try:
        eps, rep = verify_no_symmetry(tmap, delta, args.max_n, args.grid)
    except NoEpsilonFound as exc:
        return {"suite": "symmetry", "delta": scalar_to_json(delta), "eps": None, "error": str(exc), "pass": False}, False
    return dict(rep.to_json(), suite="symmetry", **{"pass": True}), True


def verify_lemma12_suite(args) -> tuple[dict, bool]:
    tmap = _map(args)
    eps = _eps_default(args, tmap)
    slope = str(args.slope)
    cases = lemma12_cases(tmap, eps, args.max_j)
    work = [
        (_case_lemma12, (slope, args.precision_bits, scalar_to_json(eps), i, j, (scalar_to_json(ab[0]), scalar_to_json(ab[1]))))
        for i, j, ab in cases
    ]
    entries = _fan_out(args.jobs, _dispatch, work)
    ok = all(e["pass"] for e in entries)
    return {"suite": "lemma12", "eps": scalar_to_json(eps), "max_j": args.max_j, "cases": entries, "not_found": sum(not e["pass"] for e in entries), "pass": ok}, ok


SUITES = {
    "lemmas": verify_lemmas,
    "completeness": verify_completeness_suite,
    "symmetry": verify_symmetry_suite,
    "lemma12": verify_lemma12_suite,
}


def cmd_verify(args):
    suite = SUITES.get(args.suite)
    if suite is None:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    payload, ok = suite(args)
    return payload, None, ok


COMMANDS = {
    "orbit": cmd_orbit,
    "kappa": cmd_kappa,
    "delta": cmd_delta,
    "pattern": cmd_pattern,
    "realize": cmd_realize,
    "arcs": cmd_arcs,
    "chain": cmd_chain,
    "symmetry": cmd_symmetry,
    "verify": cmd_verify,
    "invariant": cmd_invariant,
    "distinguish": cmd_distinguish,
    "count": cmd_count,
}


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--slope", help="slope: p/q, decimal, or sqrt2/sqrt3/sqrt5/phi")
    common.add_argument("--precision-bits", dest="precision_bits", help="interval precision for irrational slopes")
    common.add_argument("--format", choices=("json", "csv", "plotdata"))
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--figure", help="also render the plot tables to this image file (needs matplotlib)")
    common.add_argument("--config", help="key = value file supplying defaults for any option")
    common.add_argument("--jobs", help="worker processes for verify suites")

    p = argparse.ArgumentParser(prog="tentlim", description="Exact combinatorics of tent-map inverse limits.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    sp = add("orbit", "critical orbit c_1..c_N with kappa and preperiodicity")
    sp.add_argument("--depth")
    sp = add("kappa", "kappa = min{i >= 3 : c_i <= c}")
    sp.add_argument("--depth")
    sp = add("delta", "the delta budget truncated at a depth")
    sp.add_argument("--depth")
    sp = add("pattern", "k-pattern and turning points of T^n on a window (default: the core)")
    sp.add_argument("--n")
    sp.add_argument("--lo")
    sp.add_argument("--hi")
    sp = add("realize", "find a window of the core realizing a pattern")
    sp.add_argument("--pattern", help="comma-separated levels, e.g. 3,1,2")
    sp.add_argument("--max-n", dest="max_n")
    sp = add("arcs", "the arc A_i at chain level k, its pattern and salient points")
    sp.add_argument("--i")
    sp.add_argument("--k")
    sp = add("chain", "natural chain C_k")
    sp.add_argument("--k")
    sp = add("symmetry", "epsilon-symmetry of T^n on a window")
    sp.add_argument("--n")
    sp.add_argument("--lo")
    sp.add_argument("--hi")
    sp.add_argument("--eps")
    sp.add_argument("--center")
    sp = add("verify", "run a verification suite")
    sp.add_argument("--suite", help="lemmas | completeness | symmetry | lemma12")
    sp.add_argument("--max-i", dest="max_i")
    sp.add_argument("--max-n", dest="max_n")
    sp.add_argument("--max-j", dest="max_j")
    sp.add_argument("--grid")
    sp.add_argument("--delta-depth", dest="delta_depth")
    sp.add_argument("--eps")
    sp.add_argument("--k")
    sp.add_argument("--D")
    sp.add_argument("--midpoints", help="restrict admissible midpoints m_i (negative controls)")
    sp = add("invariant", "invariant sequence: patterns of [m_(n-1), m_n] and side bits")
    sp.add_argument("--max-depth", dest="max_depth")
    sp = add("distinguish", "first depth at which two slopes' invariants differ")
    sp.add_argument("--slope2")
    sp.add_argument("--max-depth", dest="max_depth")
    sp = add("count", "number of k-points of a level on [m_K, m_(K+1))")
    sp.add_argument("--K")
    sp.add_argument("--level")
    sp.add_argument("--closed", action="store_const", const="true", help="count on the closed window")
    return p


# -- output ---------------------------------------------------------------------


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(obj, list):
        for j, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{j}]")
    else:
        yield prefix, "null" if obj is None else (json.dumps(obj) if isinstance(obj, bool) else obj)


def render_output(payload: dict, tables: Optional[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, value in _flatten(payload):
            w.writerow([key, value])
        return buf.getvalue()
    if not tables:
        raise UsageError("this command has no plot data; use --format json or csv")
    return tables_to_text(tables)


def run_command(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        _resolve(args)
        payload, tables, ok = COMMANDS[args.command](args)
        text = render_output(payload, tables, args.format)
        if args.figure:
            if not tables:
                raise UsageError("this command has no plot data to draw")
            render(tables, args.figure, title=f"{args.command} s={args.slope}")
    except UsageError as exc:
        print(f"tentlim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"tentlim: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (TentlimError, ValueError, ZeroDivisionError, RuntimeError) as exc:
        print(f"tentlim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
