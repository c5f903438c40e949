"""Command-line front end: analyze scenarios, compare variants, emit line
graphs, and boot the HTTP service.

Exit codes: 0 success, 2 input error (one machine-readable line on stderr,
nothing on stdout), 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import analysis
from .errors import InputError
from .ingestion import load_document, parse_scenario
from .linegraph import RenderOptions, export_dot, generalized_line_graph, threshold_line_graph
from .model import (
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    AnalysisReport,
    IntersectionMatrix,
)

_VARIANTS = {"threshold": VARIANT_THRESHOLD, "equality": VARIANT_EQUALITY}


def _band(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"band must look like LO:HI with integers, got {text!r}"
        ) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenq",
        description="Structural analysis of scenario hypergraphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="full structural report for one input")
    analyze.add_argument("input", help="scenario file (any supported format)")
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    analyze.add_argument("--variant", choices=tuple(_VARIANTS), default="threshold",
                         help="chain variant feeding the structure vector")
    analyze.add_argument("--min-dim", type=int, action="append", default=[],
                         metavar="N", help="include the line graph at p* = N")
    analyze.add_argument("--band", type=_band, action="append", default=[],
                         metavar="LO:HI", help="include the band line graph")
    analyze.add_argument("--precision", type=int, default=4,
                         help="decimal places for rendered rationals")

    compare = sub.add_parser("compare", help="diff two scenario inputs")
    compare.add_argument("a")
    compare.add_argument("b")
    compare.add_argument("--format", choices=("text", "json"), default="text")
    compare.add_argument("--precision", type=int, default=4)

    lg = sub.add_parser("linegraph", help="print one line graph as DOT")
    lg.add_argument("input")
    pick = lg.add_mutually_exclusive_group(required=True)
    pick.add_argument("--min-dim", type=int, metavar="N")
    pick.add_argument("--band", type=_band, metavar="LO:HI")

    export = sub.add_parser("export-dot", help="write DOT files for several bands")
    export.add_argument("input")
    export.add_argument("--min-dim", type=int, action="append", default=[], metavar="N")
    export.add_argument("--band", type=_band, action="append", default=[],
                        metavar="LO:HI")
    export.add_argument("--out-dir", default=".")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--listen", default=None, metavar="HOST:PORT")
    serve.add_argument("--data-dir", default=None)
    serve.add_argument("--ui-dir", default=None)
    return parser


def _load(path: str):
    """Parse a path into a ScenarioMap or IntersectionMatrix; warnings from
    the parser go to stderr."""
    try:
        doc = load_document(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        parsed = parse_scenario(doc)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return parsed


def _matrix_of(source) -> IntersectionMatrix:
    if isinstance(source, IntersectionMatrix):
        return source
    return analysis.intersection_matrix(source)


def _symbol(variant: str) -> str:
    return "K" if variant == VARIANT_THRESHOLD else "H"


def _render_classes(classes: tuple[tuple[str, ...], ...]) -> str:
    return " ".join("{" + ", ".join(group) + "}" for group in classes)


def _render_text_report(report: AnalysisReport, places: int) -> str:
    m = report.matrix
    out = []
    title = report.label or report.scenario_id
    out.append(f"scenario: {title}")
    out.append(f"id: {report.scenario_id}    digest: {report.digest}")
    out.append(f"alternatives: {m.size}    max shared face P = {m.max_shared_face}")
    out.append("")
    out.append("shared-face dimensions (diagonal = hyperedge dimension):")
    width = max([len(i) for i in m.ids] + [4]) + 2
    header = " " * width + "".join(i.rjust(width) for i in m.ids)
    out.append(header)
    for h, row in enumerate(m.dims):
        out.append(m.ids[h].rjust(width) + "".join(str(e).rjust(width) for e in row))
    if m.max_shared_face >= 0:
        out.append("")
        out.append("connectivity classes by level (threshold chains | exact chains):")
        for q in range(m.max_shared_face + 1):
            left = _render_classes(report.threshold_classes.levels[q])
            right = _render_classes(report.equality_classes.levels[q])
            out.append(f"  q={q}  {left}  |  {right}")
    out.append("")
    sym = _symbol(report.variant)
    if report.complexity is not None and report.complexity.all_one_to_one:
        out.append("mapping is one-to-one; no structure vector")
        out.append(f"C({sym}) = 0 (one-to-one)")
    elif report.condition is not None:
        dims = ", ".join(f"{eid}: {m.dim_of(i)}" for i, eid in enumerate(m.ids))
        out.append(f"condition: {report.condition}")
        out.append(f"hyperedge dimensions: {dims}")
    else:
        out.append(f"s({sym}) = {report.structure_vector.render()}")
        score = report.complexity
        out.append(f"C({sym}) = {score.decimal(places)} (exact {score.exact()})")
    for g in report.line_graphs:
        lo, hi = g.band
        edges = ", ".join(f"{h}--{k}" for h, k in g.sorted_edges()) or "(none)"
        out.append("")
        out.append(f"line graph, band {lo}..{hi}: {edges}")
    return "\n".join(out) + "\n"


def _cmd_analyze(args) -> int:
    source = _load(args.input)
    report = analysis.build_report(
        source,
        variant=_VARIANTS[args.variant],
        min_dims=args.min_dim,
        bands=args.band,
    )
    if args.format == "json":
        body = json.dumps(analysis.report_to_dict(report, args.precision), indent=2)
        print(body)
    else:
        print(_render_text_report(report, args.precision), end="")
    return 0


def _render_text_diff(diff: analysis.VariantDiff, places: int) -> str:
    out = []
    out.append(f"compare: {diff.a.label or diff.a_id}  vs  {diff.b.label or diff.b_id}")
    if not diff.structural_change:
        out.append("no structural change")
        return "\n".join(out) + "\n"
    if diff.complexity_delta is not None:
        a = diff.a.complexity.decimal(places)
        b = diff.b.complexity.decimal(places)
        from .model import format_fraction

        delta = format_fraction(diff.complexity_delta, places)
        out.append(f"complexity: {a} → {b} ({diff.direction}, delta {delta})")
    else:
        out.append("complexity: n/a (a degenerate input lacks a structure vector)")
    out.append("classes per level (a → b):")
    for d in diff.level_deltas:
        ca = "-" if d.classes_a is None else str(d.classes_a)
        cb = "-" if d.classes_b is None else str(d.classes_b)
        out.append(f"  q={d.level}  {ca} → {cb}")
    for name, rows in (("merged", diff.merged), ("split", diff.split)):
        if rows:
            out.append(f"{name} pairs:")
            for q, pairs in rows:
                rendered = ", ".join(f"({h}, {k})" for h, k in pairs)
                out.append(f"  q={q}: {rendered}")
    return "\n".join(out) + "\n"


def _cmd_compare(args) -> int:
    report_a = analysis.build_report(_load(args.a))
    report_b = analysis.build_report(_load(args.b))
    diff = analysis.compare_reports(report_a, report_b)
    if args.format == "json":
        print(json.dumps(analysis.diff_to_dict(diff, args.precision), indent=2))
    else:
        print(_render_text_diff(diff, args.precision), end="")
    return 0


def _requested_graph(matrix: IntersectionMatrix, min_dim, band):
    if min_dim is not None:
        return threshold_line_graph(matrix, min_dim)
    return generalized_line_graph(matrix, *band)


def _cmd_linegraph(args) -> int:
    matrix = _matrix_of(_load(args.input))
    graph = _requested_graph(matrix, args.min_dim, args.band)
    print(export_dot(graph), end="")
    return 0


def _cmd_export_dot(args) -> int:
    if not args.min_dim and not args.band:
        raise InputError("export-dot needs at least one --min-dim or --band")
    matrix = _matrix_of(_load(args.input))
    stem = Path(args.input).stem
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for d in args.min_dim:
        graph = threshold_line_graph(matrix, d)
        path = out_dir / f"{stem}.mindim-{d}.dot"
        path.write_text(export_dot(graph, RenderOptions(name=path.stem)))
        written.append(path)
    for lo, hi in args.band:
        graph = generalized_line_graph(matrix, lo, hi)
        path = out_dir / f"{stem}.band-{lo}-{hi}.dot"
        path.write_text(export_dot(graph, RenderOptions(name=path.stem)))
        written.append(path)
    for path in written:
        print(path)
    return 0


def _cmd_serve(args) -> int:
    from . import service

    return service.run_from_cli(args.listen, args.data_dir, args.ui_dir)


_COMMANDS = {
    "analyze": _cmd_analyze,
    "compare": _cmd_compare,
    "linegraph": _cmd_linegraph,
    "export-dot": _cmd_export_dot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure: report, never traceback on stdout
        print(f"InternalError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
