"""Command-line interface: ``bilip classify|analyze|probe|puiseux EXPR``.

Exit codes: 0 success, 2 parse or usage error, 3 degenerate input (constant
polynomial, point not on the curve at infinity), 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional, Sequence

from .fibers import AnalysisConfig, classify_single_variable, full_verdict, restrict_to_plane
from .infinity import PointAtInfinity, local_model
from .parser import ParseError, parse, parse_constant
from .poly import MultiPoly
from .probe import DegenerateSliceError, distance_probe, write_csv
from .puiseux import PuiseuxError, puiseux_roots, reconstruction_valuation
from .report import (
    ReportDocument,
    RunConfig,
    branch_dict,
    classification_dict,
    probe_dict,
    separation_dict,
    verdict_dict,
)

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_NUMERIC = 0, 2, 3, 4


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _csv_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("expr", help="polynomial, e.g. 'x*y' or '(x+2*y)^3+(x+2*y)'")
    common.add_argument("--vars", default="x,y", help="comma-separated variable names (default x,y)")
    common.add_argument("--t-samples", default="0,1,2,1+i,-3", help="comma-separated level values")
    common.add_argument("--order", type=int, default=12, help="Puiseux truncation order N in [4, 64]")
    common.add_argument("--radii", default="10,100,1000,10000", help="comma-separated probe radii")
    common.add_argument("--angles", type=int, default=64, help="sampled angles per radius")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--csv-dump", default=None, help="write probe samples (radius, theta, distance)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="bilip", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="is f a polynomial in one linear form?")
    a = sub.add_parser("analyze", parents=[common], help="classification plus analysis at infinity")
    a.add_argument("--probe", action="store_true", help="also probe the first two t samples numerically")
    pr = sub.add_parser("probe", parents=[common], help="numerical fiber distance at growing radii")
    pr.add_argument("--s", default="1", help="first level value")
    pr.add_argument("--t", default="2", help="second level value")
    pu = sub.add_parser("puiseux", parents=[common], help="Puiseux roots of a level at a point at infinity")
    pu.add_argument("--point", required=True, help="point at infinity as a:b, e.g. 1:0")
    pu.add_argument("--t", default="0", help="level value")
    return p


def _config(args) -> RunConfig:
    try:
        radii = tuple(float(r) for r in _csv_list(args.radii))
    except ValueError as exc:
        raise CommandError(f"bad --radii: {exc}", EXIT_PARSE) from exc
    try:
        return RunConfig(
            variables=tuple(_csv_list(args.vars)),
            t_samples=tuple(_csv_list(args.t_samples)),
            truncation_order=args.order,
            radii=radii,
            angles_per_radius=args.angles,
            seed=args.seed,
            output_format=args.format,
            csv_dump_path=args.csv_dump,
        )
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_PARSE) from exc


def _parse_value(text: str, what: str):
    try:
        return parse_constant(text)
    except ParseError as exc:
        raise CommandError(f"{what} {text!r}: {exc}", EXIT_PARSE) from exc


def _parse_input(args, cfg: RunConfig) -> MultiPoly:
    for t in cfg.t_samples:
        _parse_value(t, "t sample")
    try:
        f = parse(args.expr, cfg.variables)
    except ParseError as exc:
        caret = " " * exc.position + "^"
        raise CommandError(f"parse error {exc}\n  {args.expr}\n  {caret}", EXIT_PARSE) from exc
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_PARSE) from exc
    if f.is_constant():
        raise CommandError("the polynomial is constant; nothing to analyze", EXIT_DEGENERATE)
    return f


def _plane(f: MultiPoly, cfg: RunConfig, doc: ReportDocument) -> MultiPoly:
    if f.nvars == 2:
        return f
    if f.nvars < 2:
        raise CommandError("probing needs at least two variables", EXIT_DEGENERATE)
    r = restrict_to_plane(f, cfg.seed)
    doc.exceptional_log.extend(r.log)
    doc.exceptional_log.append(
        f"probed the plane restriction {r.poly.to_expr(list(cfg.variables[:2]))} (seed {r.seed})"
    )
    return r.poly


def _run_probe(f: MultiPoly, s, t, cfg: RunConfig, doc: ReportDocument) -> None:
    plane = _plane(f, cfg, doc)
    try:
        rep = distance_probe(plane, complex(s), complex(t), cfg.radii, cfg.angles_per_radius, cfg.seed)
    except DegenerateSliceError as exc:
        raise CommandError(f"numeric failure: {exc}", EXIT_NUMERIC) from exc
    doc.probe = probe_dict(rep)
    if not rep.radii:
        raise CommandError("numeric failure: every radius was degenerate", EXIT_NUMERIC)
    if cfg.csv_dump_path:
        write_csv(rep, cfg.csv_dump_path)


def run(args) -> ReportDocument:
    cfg = _config(args)
    f = _parse_input(args, cfg)
    start = time.perf_counter()
    doc = ReportDocument(
        command=args.command,
        input_expression=args.expr,
        variables=list(cfg.variables),
        nvars=f.nvars,
        parsed_degree=f.degree,
        config=cfg.to_dict(),
    )
    if args.command in ("classify", "analyze"):
        doc.classification = classification_dict(classify_single_variable(f))
    if args.command == "analyze":
        v = full_verdict(f, AnalysisConfig(tuple(cfg.t_samples), cfg.truncation_order, cfg.seed))
        doc.points_at_infinity = [separation_dict(r) for r in v.per_point]
        doc.verdict = verdict_dict(v, cfg.variables[:2])
        doc.exceptional_log.extend(v.notes)
        if args.probe:
            s, t = (_parse_value(x, "t sample") for x in cfg.t_samples[:2])
            _run_probe(f, s, t, cfg, doc)
    elif args.command == "probe":
        s, t = _parse_value(args.s, "--s"), _parse_value(args.t, "--t")
        if s == t:
            raise CommandError("--s and --t must differ", EXIT_PARSE)
        _run_probe(f, s, t, cfg, doc)
    elif args.command == "puiseux":
        doc.puiseux = _puiseux(f, args, cfg)
    doc.timing = {"seconds": round(time.perf_counter() - start, 6)}
    return doc


def _puiseux(f: MultiPoly, args, cfg: RunConfig) -> dict:
    if f.nvars != 2:
        raise CommandError("puiseux works on polynomials in two variables", EXIT_DEGENERATE)
    try:
        point = PointAtInfinity.parse(args.point)
    except (ParseError, ValueError) as exc:
        raise CommandError(f"bad --point {args.point!r}: {exc}", EXIT_PARSE) from exc
    t = _parse_value(args.t, "--t")
    try:
        model = local_model(f, point)
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_DEGENERATE) from exc
    if not model.tangent_to_infinity:
        raise CommandError(
            f"{point}: the levels are not tangent to the line at infinity there "
            "(lowest form is not a multiple of v^m); the tangent-cone test applies instead",
            EXIT_DEGENERATE,
        )
    g = model.g_at(t)
    N = cfg.truncation_order
    try:
        branches = puiseux_roots(g, N)
    except PuiseuxError as exc:
        raise CommandError(f"numeric failure: {exc}", EXIT_NUMERIC) from exc
    return {
        "point": str(point),
        "chart": model.chart.describe(),
        "t": str(t),
        "order": N,
        "local_equation": g.to_expr(["u", "v"]),
        "m": model.m,
        "branches": [branch_dict(b) for b in branches],
        "reconstruction_valuation": str(reconstruction_valuation(g, branches, N)),
    }


def render_text(doc: ReportDocument) -> str:
    lines = [f"{doc.command}: {doc.input_expression}  (degree {doc.parsed_degree}, {doc.nvars} variables)"]
    c = doc.classification
    if c:
        if c["single_variable"]:
            lines.append(f"single variable: yes, direction ({', '.join(c['direction'])})")
        else:
            lines.append(f"single variable: no ({c['witness']})")
    for p in doc.points_at_infinity:
        extra = ""
        if p["tangent_to_infinity"]:
            extra = f" m={p['m']} beta={p['beta']} kappa={p['kappa_measured']} e={p['exponent_e']}"
        lines.append(f"  {p['point']}: {p['verdict']}{extra}")
    if doc.verdict:
        lines.append(f"conclusion: {doc.verdict['conclusion']}")
        for z in doc.verdict["critical_values"]:
            lines.append(f"  excluded value {complex(z['re'], z['im'])!r}")
    if doc.probe:
        pr = doc.probe
        for R, dist in zip(pr["radii"], pr["min_distance_per_radius"]):
            lines.append(f"  R={R:g}: distance <= {dist:.6g}")
        lines.append(f"fitted exponent: {pr['fitted_exponent']}  ratio to |s-t|: {pr['ratio_to_value_gap']}")
    if doc.puiseux:
        pu = doc.puiseux
        lines.append(f"g = {pu['local_equation']} at {pu['point']} ({pu['chart']})")
        for b in pu["branches"]:
            terms = " + ".join(f"({t['c']})*s^{t['k']}" for t in b["coefficients"][:6])
            lines.append(f"  u = s^{b['ramification']}: v = {terms} + ...  (multiplicity {b['multiplicity']})")
        lines.append(f"reconstruction valuation: {pu['reconstruction_valuation']}")
    for note in doc.exceptional_log:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc = run(args)
    except CommandError as exc:
        print(f"bilip: {exc}", file=sys.stderr)
        return exc.code
    except ArithmeticError as exc:
        print(f"bilip: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = doc.to_json() if args.format == "json" else render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
