#!/usr/bin/env python3
"""Walk the irrigation-policy what-if exercise end to end.

Analyzes the base scenario, applies the GMO edit batch, re-analyzes, prints
the structural comparison, and drops the line-graph family as DOT files
under out/ (render with `dot -Tpng`).

Usage: python scripts/irrigation_whatif.py [--out-dir out]
"""

import argparse
import json
from pathlib import Path

from scenq import (
    build_report,
    compare_reports,
    export_dot,
    load_document,
    parse_scenario,
    threshold_line_graph,
)
from scenq.linegraph import RenderOptions
from scenq.service import apply_edits

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def summarize(tag, report):
    vec = report.structure_vector.render() if report.structure_vector else "n/a"
    score = report.complexity.decimal() if report.complexity else "n/a"
    print(f"{tag}: s = {vec}, C = {score}, P = {report.matrix.max_shared_face}")
    for q, classes in enumerate(report.threshold_classes.levels):
        rendered = " ".join("{" + ", ".join(g) + "}" for g in classes)
        print(f"    q={q}  {rendered}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out")
    args = parser.parse_args()

    base = parse_scenario(load_document(str(FIXTURES / "mexico-base.json")))
    base_report = build_report(base)
    summarize("base", base_report)

    batch = json.loads((FIXTURES / "gmo-edit-batch.json").read_text())
    extended = apply_edits(base, batch["edits"])
    extended_report = build_report(extended)
    print()
    summarize("with GMO alternatives", extended_report)

    diff = compare_reports(base_report, extended_report)
    print()
    print(
        f"complexity {base_report.complexity.decimal()} -> "
        f"{extended_report.complexity.decimal()} ({diff.direction})"
    )

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for tag, report in (("base", base_report), ("gmo", extended_report)):
        matrix = report.matrix
        for p_star in range(1, matrix.max_shared_face + 1):
            graph = threshold_line_graph(matrix, p_star)
            path = out_dir / f"{tag}.L{p_star}.dot"
            path.write_text(export_dot(graph, RenderOptions(name=path.stem)))
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
