"""Structural measures over scenario hypergraphs.

Pipeline: ScenarioMap -> IntersectionMatrix -> per-level connectivity
classes (two chain variants) -> structure vector -> complexity score, plus
report assembly and report-to-report comparison.

Two chain variants are first-class:

  complex-threshold   edge (h,k) at level q iff p_hk >= q.  This is the
                      simplicial-complex reading: sharing a face of dimension
                      q implies sharing faces of every lower dimension.
  hypergraph-equality edge (h,k) at level q iff p_hk == q exactly, the
                      literal equal-dimension chain condition on the raw
                      hypergraph.

Every hyperedge appears at every level; one too small to share a q-face can
have no incident edge there and sits in a singleton class.  Class counts per
level form the structure vector, and the complexity score aggregates
sum((q+1)/s_q) over q = 0..P in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linegraph as _lg
from .errors import LevelOutOfRange, NoSharedFaces, ZeroClassCount
from .model import (
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    AnalysisReport,
    ComplexityScore,
    IntersectionMatrix,
    LineGraph,
    QClassification,
    ScenarioMap,
    StructureVector,
    digest_matrix,
    digest_scenario,
    format_fraction,
    is_one_to_one,
    validate_scenario,
)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def intersection_matrix(smap: ScenarioMap) -> IntersectionMatrix:
    """Shared-face dimensions |EA_h ∩ EA_k| - 1, hyperedge dimensions on the
    diagonal, -1 where nothing is shared."""
    validate_scenario(smap)
    sets = [a.consequence_ids for a in smap.alternatives]
    n = len(sets)
    dims = [
        tuple(
            len(sets[h]) - 1 if h == k else len(sets[h] & sets[k]) - 1
            for k in range(n)
        )
        for h in range(n)
    ]
    return IntersectionMatrix(smap.alternative_ids, tuple(dims))


def _classes_at(m: IntersectionMatrix, level: int, exact: bool
                ) -> tuple[tuple[str, ...], ...]:
    if level < 0 or level > m.max_shared_face:
        raise LevelOutOfRange(
            f"level {level} outside 0..{m.max_shared_face}"
        )
    n = m.size
    dsu = _DisjointSet(n)
    for h in range(n):
        for k in range(h + 1, n):
            p = m.dims[h][k]
            if (p == level) if exact else (p >= level):
                dsu.union(h, k)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(dsu.find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda members: members[0])
    return tuple(tuple(m.ids[i] for i in members) for members in ordered)


def q_classes_threshold(m: IntersectionMatrix, level: int
                        ) -> tuple[tuple[str, ...], ...]:
    """Connectivity classes at `level` under the p_hk >= q chain condition."""
    return _classes_at(m, level, exact=False)


def q_classes_equality(m: IntersectionMatrix, level: int
                       ) -> tuple[tuple[str, ...], ...]:
    """Connectivity classes at `level` under the exact p_hk == q chains."""
    return _classes_at(m, level, exact=True)


def classify(m: IntersectionMatrix, variant: str = VARIANT_THRESHOLD
             ) -> QClassification:
    """All levels 0..P at once; empty when nothing intersects (P = -1)."""
    if variant not in (VARIANT_THRESHOLD, VARIANT_EQUALITY):
        raise ValueError(f"unknown variant {variant!r}")
    exact = variant == VARIANT_EQUALITY
    top = m.max_shared_face
    levels = tuple(_classes_at(m, q, exact) for q in range(top + 1))
    return QClassification(variant, m.ids, levels)


def structure_vector(m: IntersectionMatrix, variant: str = VARIANT_THRESHOLD
                     ) -> StructureVector:
    """Class counts [s_0 .. s_P] for the chosen variant.

    Raises NoSharedFaces when no two hyperedges intersect (P = -1): the
    level range is empty and the vector undefined.
    """
    if m.max_shared_face < 0:
        raise NoSharedFaces(
            "no pair of hyperedges shares a vertex; structure vector undefined"
        )
    return StructureVector(classify(m, variant).class_counts())


def complexity_from_counts(counts: Sequence[int]) -> Fraction:
    """The aggregate sum((q+1)/s_q) over q = 0..len-1, exact."""
    total = Fraction(0)
    for q, s_q in enumerate(counts):
        if s_q <= 0:
            raise ZeroClassCount(f"class count at level {q} is {s_q}")
        total += Fraction(q + 1, s_q)
    return total


def complexity(smap: ScenarioMap, s: StructureVector | None) -> ComplexityScore:
    """Complexity of a scenario: 0 for one-to-one maps, else the aggregate
    over the supplied structure vector."""
    if is_one_to_one(smap):
        return ComplexityScore(Fraction(0), all_one_to_one=True)
    if s is None:
        raise NoSharedFaces("non-one-to-one map without a structure vector")
    return ComplexityScore(complexity_from_counts(s.entries))


CONDITION_NO_SHARED_FACES = "NoSharedFaces"


def build_report(
    source: ScenarioMap | IntersectionMatrix,
    *,
    scenario_id: str | None = None,
    label: str | None = None,
    variant: str = VARIANT_THRESHOLD,
    min_dims: Sequence[int] = (),
    bands: Sequence[tuple[int, int]] = (),
) -> AnalysisReport:
    """Run the whole pipeline on one snapshot and stamp it with its digest.

    `source` may be a ScenarioMap or an already-known IntersectionMatrix
    (for inputs that publish only intersections).  Degenerate inputs yield a
    report with condition "NoSharedFaces" and per-edge dimensions instead of
    a structure vector.
    """
    if isinstance(source, ScenarioMap):
        smap = validate_scenario(source)
        matrix = intersection_matrix(smap)
        digest = digest_scenario(smap)
        one_to_one = is_one_to_one(smap)
        labels = smap.alternative_labels()
        label = smap.label if label is None else label
    else:
        matrix = source
        digest = digest_matrix(matrix)
        one_to_one = matrix.is_one_to_one()
        labels = {}
        label = label or ""

    threshold = classify(matrix, VARIANT_THRESHOLD)
    equality = classify(matrix, VARIANT_EQUALITY)

    vector: StructureVector | None = None
    score: ComplexityScore | None = None
    condition: str | None = None
    if one_to_one:
        score = ComplexityScore(Fraction(0), all_one_to_one=True)
    elif matrix.max_shared_face < 0:
        condition = CONDITION_NO_SHARED_FACES
    else:
        vector = structure_vector(matrix, variant)
        score = ComplexityScore(complexity_from_counts(vector.entries))

    graphs: list[LineGraph] = []
    for d in min_dims:
        graphs.append(_lg.threshold_line_graph(matrix, d))
    for lo, hi in bands:
        graphs.append(_lg.generalized_line_graph(matrix, lo, hi))

    return AnalysisReport(
        scenario_id=scenario_id or digest[7:19],
        label=label,
        digest=digest,
        matrix=matrix,
        threshold_classes=threshold,
        equality_classes=equality,
        structure_vector=vector,
        complexity=score,
        condition=condition,
        line_graphs=tuple(graphs),
        variant=variant,
        labels=labels,
    )


@dataclass(frozen=True)
class LevelDelta:
    level: int
    classes_a: int | None
    classes_b: int | None


@dataclass(frozen=True)
class VariantDiff:
    """Structural comparison of two analysis reports (b relative to a)."""

    a_id: str
    b_id: str
    complexity_delta: Fraction | None
    direction: str | None
    level_deltas: tuple[LevelDelta, ...]
    merged: tuple[tuple[int, tuple[tuple[str, str], ...]], ...]
    split: tuple[tuple[int, tuple[tuple[str, str], ...]], ...]
    structural_change: bool
    a: AnalysisReport = field(repr=False, compare=False, default=None)
    b: AnalysisReport = field(repr=False, compare=False, default=None)


def _class_index(classes: tuple[tuple[str, ...], ...]) -> dict[str, int]:
    return {eid: i for i, group in enumerate(classes) for eid in group}


def compare_reports(a: AnalysisReport, b: AnalysisReport) -> VariantDiff:
    """Exact complexity delta C(b) - C(a), aligned per-level class counts,
    and the EA pairs (over ids present in both) that merged or split."""
    delta: Fraction | None = None
    direction: str | None = None
    if a.complexity is not None and b.complexity is not None:
        delta = b.complexity.value - a.complexity.value
        direction = (
            "decreased" if delta < 0 else "increased" if delta > 0 else "unchanged"
        )

    counts_a = a.threshold_classes.class_counts()
    counts_b = b.threshold_classes.class_counts()
    top = max(len(counts_a), len(counts_b)) - 1
    level_deltas = tuple(
        LevelDelta(
            q,
            counts_a[q] if q < len(counts_a) else None,
            counts_b[q] if q < len(counts_b) else None,
        )
        for q in range(top + 1)
    )

    shared = sorted(
        set(a.matrix.ids) & set(b.matrix.ids),
        key=lambda eid: a.matrix.ids.index(eid),
    )
    merged: list[tuple[int, tuple[tuple[str, str], ...]]] = []
    split: list[tuple[int, tuple[tuple[str, str], ...]]] = []
    for q in range(min(len(counts_a), len(counts_b))):
        in_a = _class_index(a.threshold_classes.levels[q])
        in_b = _class_index(b.threshold_classes.levels[q])
        merged_pairs = []
        split_pairs = []
        for i, h in enumerate(shared):
            for k in shared[i + 1:]:
                together_a = in_a[h] == in_a[k]
                together_b = in_b[h] == in_b[k]
                if together_b and not together_a:
                    merged_pairs.append((h, k))
                elif together_a and not together_b:
                    split_pairs.append((h, k))
        if merged_pairs:
            merged.append((q, tuple(sorted(merged_pairs))))
        if split_pairs:
            split.append((q, tuple(sorted(split_pairs))))

    same_partitions = len(counts_a) == len(counts_b) and all(
        {frozenset(g) for g in a.threshold_classes.levels[q]}
        == {frozenset(g) for g in b.threshold_classes.levels[q]}
        for q in range(len(counts_a))
    )
    unchanged = (
        same_partitions
        and a.matrix.ids == b.matrix.ids
        and (delta == 0 if delta is not None else a.condition == b.condition)
    )
    return VariantDiff(
        a_id=a.scenario_id,
        b_id=b.scenario_id,
        complexity_delta=delta,
        direction=direction,
        level_deltas=level_deltas,
        merged=tuple(merged),
        split=tuple(split),
        structural_change=not unchanged,
        a=a,
        b=b,
    )


def _classification_to_list(qc: QClassification) -> list[dict]:
    return [
        {"level": q, "classes": [list(group) for group in classes]}
        for q, classes in enumerate(qc.levels)
    ]


def _complexity_to_dict(score: ComplexityScore | None, places: int) -> dict | None:
    if score is None:
        return None
    return {
        "exact": score.exact(),
        "decimal": score.decimal(places),
        "one_to_one": score.all_one_to_one,
    }


def line_graph_to_dict(g: LineGraph) -> dict:
    return {
        "band": [g.band[0], g.band[1]],
        "nodes": list(g.nodes),
        "edges": [[h, k] for h, k in g.sorted_edges()],
    }


def report_to_dict(report: AnalysisReport, places: int = 4) -> dict:
    """The stable JSON layout shared by the CLI, the HTTP service, and the UI.

    Field order is fixed; serializing the same report twice is byte-identical.
    """
    m = report.matrix
    return {
        "scenario": {"id": report.scenario_id, "label": report.label},
        "digest": report.digest,
        "variant": report.variant,
        "alternatives": [
            {"id": eid, "label": report.labels.get(eid, ""), "dim": m.dim_of(i)}
            for i, eid in enumerate(m.ids)
        ],
        "intersection": {
            "ids": list(m.ids),
            "dims": [list(row) for row in m.dims],
            "max_shared_face": m.max_shared_face,
        },
        "one_to_one": bool(report.complexity and report.complexity.all_one_to_one),
        "condition": report.condition,
        "classes": {
            VARIANT_THRESHOLD: _classification_to_list(report.threshold_classes),
            VARIANT_EQUALITY: _classification_to_list(report.equality_classes),
        },
        "structure_vector": (
            list(report.structure_vector.entries) if report.structure_vector else None
        ),
        "complexity": _complexity_to_dict(report.complexity, places),
        "line_graphs": [line_graph_to_dict(g) for g in report.line_graphs],
    }


def diff_to_dict(diff: VariantDiff, places: int = 4) -> dict:
    def _endpoint(report: AnalysisReport) -> dict:
        return {
            "id": report.scenario_id,
            "label": report.label,
            "digest": report.digest,
            "complexity": _complexity_to_dict(report.complexity, places),
        }

    return {
        "a": _endpoint(diff.a),
        "b": _endpoint(diff.b),
        "complexity_delta": (
            None
            if diff.complexity_delta is None
            else {
                "exact": str(diff.complexity_delta),
                "decimal": format_fraction(diff.complexity_delta, places),
            }
        ),
        "direction": diff.direction,
        "levels": [
            {"level": d.level, "classes_a": d.classes_a, "classes_b": d.classes_b}
            for d in diff.level_deltas
        ],
        "merged": [
            {"level": q, "pairs": [[h, k] for h, k in pairs]} for q, pairs in diff.merged
        ],
        "split": [
            {"level": q, "pairs": [[h, k] for h, k in pairs]} for q, pairs in diff.split
        ],
        "structural_change": diff.structural_change,
    }
