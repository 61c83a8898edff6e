"""Command-line front end.

Exit codes: 0 for pass/success verdicts, 1 for verified failures (axiom
violations, inequality failures, non-convergence), 2 for usage or parse
errors. Reports print as text by default or as JSON with --format json.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import comparison, contraction, fixpoint, repro, spaces, topology
from .errors import PsbmError
from .numerics import point_label
from .spaces import AxiomSet, RegionCarrier, parse_point

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_VARIANTS = {v.value: v for v in AxiomSet}


def _default_seed() -> int:
    try:
        return int(os.environ.get("PSBM_SEED", "0"))
    except ValueError:
        return 0


def _resolve_space(selector: str):
    if selector.startswith("builtin:"):
        return spaces.builtin_space(selector[len("builtin:"):])
    if selector.startswith("file:"):
        path = selector[len("file:"):]
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise PsbmError(f"cannot read space file {path!r}: {exc}") from None
        return spaces.load_tabulated_space(text)
    raise PsbmError(f"space selector must be builtin:<name> or file:<path>, got {selector!r}")


def _resolve_comparison(name: str):
    if name.startswith("file:"):
        path = name[len("file:"):]
        try:
            with open(path, encoding="utf-8") as handle:
                return comparison.load_piecewise(handle.read())
        except OSError as exc:
            raise PsbmError(f"cannot read breakpoints {path!r}: {exc}") from None
    return comparison.builtin_comparison(name)


def parse_points_list(text: str) -> list:
    return [parse_point(tok) for tok in text.replace(",", " ").split()]


def _parse_indices(text: str) -> list:
    out = []
    for token in text.replace(",", " ").split():
        if ".." in token:
            lo, hi = token.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(token))
    return out


def _emit(report: dict, args, render) -> None:
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render(report))


def _with_bound(space, bound):
    if bound is not None and isinstance(space.carrier, RegionCarrier):
        return dataclasses.replace(
            space, carrier=dataclasses.replace(space.carrier, bound=bound)
        )
    return space


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _cmd_verify_axioms(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    samples = args.samples
    if samples is None and isinstance(space.carrier, RegionCarrier):
        samples = 10000
    report = spaces.check_axioms(
        space, _VARIANTS[args.variant], sample_count=samples, seed=args.seed
    )
    payload = report.to_dict()

    def render(r):
        lines = [f"variant: {r['variant']}  checked: {r['checked']}  passed: {r['passed']}"]
        for v in r["violations"]:
            lines.append(
                f"  axiom {v['axiom']} violated at ({', '.join(v['witness'])}): "
                f"lhs {v['lhs']} vs rhs {v['rhs']}"
            )
        return "\n".join(lines)

    _emit(payload, args, render)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_ball(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    center = parse_point(args.center)
    if args.candidates:
        candidates = parse_points_list(args.candidates)
    else:
        candidates = spaces.sample_carrier(space, seed=args.seed)
        if center not in candidates:
            candidates.append(center)
    ball = topology.open_ball(space, center, args.radius, candidates)
    payload = ball.to_dict()
    _emit(payload, args, lambda r: f"D({r['center']}; {r['radius']}) = {{{', '.join(r['members'])}}}")
    return EXIT_OK


def _cmd_topology(args) -> int:
    space = _resolve_space(args.space)
    top = topology.generate_topology(space)
    payload = top.to_dict()
    payload["valid"] = topology.verify_topology_axioms(top)

    def render(r):
        shown = ", ".join("{" + ", ".join(o) + "}" for o in r["opens"])
        return f"carrier {{{', '.join(r['carrier'])}}}\nopens: {shown}\nvalid: {r['valid']}"

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_separation(args) -> int:
    space = _resolve_space(args.space)
    report = topology.separation_report(topology.generate_topology(space))
    payload = report.to_dict()

    def render(r):
        lines = [f"T0: {r['t0']}  T1: {r['t1']}  T2: {r['t2']}"]
        for level in ("t0", "t1", "t2"):
            for u, v in r["witnesses"][level]:
                lines.append(f"  {level} fails for pair ({u}, {v})")
        return "\n".join(lines)

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_connected(args) -> int:
    space = _resolve_space(args.space)
    connected, witness = topology.is_connected(topology.generate_topology(space))
    payload = {
        "connected": connected,
        "witness": None
        if witness is None
        else [topology.sorted_labels(witness[0]), topology.sorted_labels(witness[1])],
    }

    def render(r):
        if r["connected"]:
            return "connected: True"
        a, b = r["witness"]
        return f"connected: False  witness: {{{', '.join(a)}}} | {{{', '.join(b)}}}"

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_cover_witness(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    indices = _parse_indices(args.indices)
    family = topology.CoverFamily(center=parse_point(args.center), indices=tuple(indices))
    subfamily = _parse_indices(args.subfamily) if args.subfamily else indices
    bound = args.bound if args.bound is not None else spaces.DEFAULT_REGION_BOUND
    witness = topology.uncovered_witness(space, family, subfamily, bound)
    payload = {
        "family": family.to_dict(),
        "subfamily": list(subfamily),
        "search_bound": bound,
        "witness": None if witness is None else point_label(witness),
    }

    def render(r):
        if r["witness"] is None:
            return "covered: every scanned point lies in some subfamily ball"
        return f"uncovered witness: {r['witness']}"

    _emit(payload, args, render)
    return EXIT_OK


def _cmd_check_comparison(args) -> int:
    fn = _resolve_comparison(args.fn)
    kind = args.kind or fn.kind
    if kind is None:
        raise PsbmError("comparison kind is untagged; pass --kind")
    grid = [float(tok) for tok in args.grid.replace(",", " ").split()] if args.grid else comparison.DEFAULT_GRID
    if kind == comparison.BOYD_WONG:
        report = comparison.check_boyd_wong_properties(fn, grid)
    else:
        report = comparison.check_matkowski_properties(fn, grid, args.budget)
    payload = report.to_dict()
    payload["kind"] = kind

    def render(r):
        lines = [f"fn: {r['fn']}  kind: {r['kind']}  passed: {r['passed']}"]
        for c in r["checks"]:
            mark = "pass" if c["passed"] else f"FAIL (witness {c['witness']})"
            lines.append(f"  {c['name']}: {mark}")
        return "\n".join(lines)

    _emit(payload, args, render)
    return EXIT_OK if report.passed else EXIT_FAIL


def _build_spec(args):
    if args.spec != "paper":
        raise PsbmError(f"unknown spec shorthand {args.spec!r}; only 'paper' is registered")
    return contraction.standard_spec(matkowski=args.matkowski)


def _cmd_certify(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    spec = _build_spec(args)
    if args.grid:
        carrier = space.carrier
        if not isinstance(carrier, RegionCarrier):
            raise PsbmError("--grid needs a region carrier")
        lo, hi = carrier.truncated_intervals()[0]
        step = (hi - lo) / (args.grid - 1)
        points = list(carrier.isolated) + [lo + i * step for i in range(args.grid)]
        report = contraction.certify(space, spec, points=points)
    else:
        report = contraction.certify(space, spec, sample_count=args.samples, seed=args.seed)
    payload = report.to_dict()

    def render(r):
        lines = [
            f"triples checked: {r['triples_checked']}  passed: {r['passed']}",
            f"excluded fixed points: {{{', '.join(r['excluded_fixed_points'])}}}",
            f"min margin: {r['min_margin']}",
        ]
        for f in r["failures"]:
            lines.append(f"  fails at ({', '.join(f['triple'])}): lhs {f['lhs']} > rhs {f['rhs']}")
        return "\n".join(lines)

    _emit(payload, args, render)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_case_table(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    spec = _build_spec(args)
    table = contraction.reproduce_case_table(space, spec, grid_size=args.grid_size)
    payload = table.to_dict()
    _emit(payload, args, lambda r: table.render())
    return EXIT_OK if table.passed else EXIT_FAIL


def _cmd_fixpoint(args) -> int:
    space = _with_bound(_resolve_space(args.space), args.bound)
    mapping = contraction.builtin_map(args.map)
    a0 = parse_point(args.start)
    trace = fixpoint.picard_iterate(space, mapping, a0, tol=args.tolerance, max_iter=args.max_iter)
    if args.format == "csv":
        print(fixpoint.trace_to_csv(trace), end="")
        return EXIT_OK if trace.converged else EXIT_FAIL
    payload = trace.to_dict()

    def render(r):
        lines = [
            f"orbit: {' -> '.join(r['orbit'])}",
            f"gaps: {r['gaps']}",
            f"converged: {r['converged']}  limit: {r['limit']}  limit gap: {r['limit_gap']}",
        ]
        return "\n".join(lines)

    _emit(payload, args, render)
    return EXIT_OK if trace.converged else EXIT_FAIL


def _cmd_repro(args) -> int:
    report = repro.run_repro(seed=args.seed)

    def render(r):
        width = max(len(i["name"]) for i in r["items"])
        lines = [
            f"{i['name']:<{width}}  {'PASS' if i['passed'] else 'FAIL'}  {i['detail']}"
            for i in r["items"]
        ]
        lines.append(f"overall: {'PASS' if r['passed'] else 'FAIL'}")
        return "\n".join(lines)

    _emit(report, args, render)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psbm",
        description="Verification toolkit for partial S_b-metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, space=True, formats=("text", "json")):
        if space:
            p.add_argument("--space", required=True, help="builtin:<name> or file:<path>")
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--bound", type=float, default=None, help="region truncation bound")

    p = sub.add_parser("verify-axioms", help="check an axiom set on a space")
    common(p)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default=AxiomSet.PARTIAL_SB.value)
    p.add_argument("--samples", type=int, default=None, help="sampled quadruples; default exhaustive on finite carriers")
    p.set_defaults(func=_cmd_verify_axioms)

    p = sub.add_parser("ball", help="materialize an open ball")
    common(p)
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--candidates", default=None, help="comma-separated candidate points")
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("topology", help="generate the topology of a finite space")
    common(p)
    p.set_defaults(func=_cmd_topology)

    p = sub.add_parser("separation", help="T0/T1/T2 report for a finite space")
    common(p)
    p.set_defaults(func=_cmd_separation)

    p = sub.add_parser("connected", help="connectedness of a finite space")
    common(p)
    p.set_defaults(func=_cmd_connected)

    p = sub.add_parser("cover-witness", help="point escaping a finite subfamily of balls")
    common(p)
    p.add_argument("--center", required=True)
    p.add_argument("--indices", required=True, help="e.g. '3..20' or '3,5,7'")
    p.add_argument("--subfamily", default=None, help="subset of --indices; default all")
    p.set_defaults(func=_cmd_cover_witness)

    p = sub.add_parser("check-comparison", help="property checks for a comparison function")
    common(p, space=False)
    p.add_argument("--fn", required=True, help="builtin name or file:<breakpoints.json>")
    p.add_argument("--kind", choices=(comparison.BOYD_WONG, comparison.MATKOWSKI), default=None)
    p.add_argument("--grid", default=None, help="comma-separated grid points")
    p.add_argument("--budget", type=int, default=comparison.DEFAULT_ITER_BUDGET)
    p.set_defaults(func=_cmd_check_comparison)

    p = sub.add_parser("certify", help="certify an interpolative contraction")
    common(p)
    p.add_argument("--spec", default="paper")
    p.add_argument("--matkowski", action="store_true")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--grid", type=int, default=None, help="exhaustive over isolated points plus an n-point ray grid")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("case-table", help="reproduce the worked-example case table")
    common(p)
    p.add_argument("--spec", default="paper")
    p.add_argument("--matkowski", action="store_true")
    p.add_argument("--grid-size", type=int, default=20)
    p.set_defaults(func=_cmd_case_table)

    p = sub.add_parser("fixpoint", help="run Picard iteration")
    common(p, formats=("text", "json", "csv"))
    p.add_argument("--map", default="paper_S")
    p.add_argument("--start", required=True)
    p.add_argument("--max-iter", type=int, default=1000)
    p.set_defaults(func=_cmd_fixpoint)

    p = sub.add_parser("repro", help="reproduce every worked example")
    common(p, space=False)
    p.set_defaults(func=_cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PsbmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    raise SystemExit(main())
