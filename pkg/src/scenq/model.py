"""Domain types for scenario structure analysis.

The central object is the ScenarioMap: an ordered bipartite mapping from
evoked alternatives to the consequences each is perceived to entail.  Viewed
as a hypergraph, alternatives are hyperedges over the consequence vertices;
all structural measures (shared-face matrix, q-connectivity classes,
structure vector, complexity) are derived from it downstream.

Everything here is an immutable value: safe to share between threads, usable
as dict keys, and byte-reproducible when serialized.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from .errors import (
    DanglingConsequence,
    DuplicateId,
    EmptyAlternative,
    SchemaViolation,
)

VARIANT_THRESHOLD = "complex-threshold"
VARIANT_EQUALITY = "hypergraph-equality"
VARIANTS = (VARIANT_THRESHOLD, VARIANT_EQUALITY)


@dataclass(frozen=True)
class Concept:
    """An identified concept (alternative or consequence) with a display label."""

    id: str
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id.strip():
            raise SchemaViolation("concept id must be a non-empty string")


@dataclass(frozen=True)
class Alternative:
    """An evoked alternative and the set of consequence ids it maps to."""

    concept: Concept
    consequence_ids: frozenset[str]

    @property
    def id(self) -> str:
        return self.concept.id

    @property
    def dim(self) -> int:
        """Hyperedge dimension: cardinality minus one."""
        return len(self.consequence_ids) - 1


@dataclass(frozen=True)
class ScenarioMap:
    """Ordered alternatives-to-consequences mapping (hyperedges over vertices)."""

    label: str
    consequences: tuple[Concept, ...]
    alternatives: tuple[Alternative, ...]

    @property
    def consequence_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.consequences)

    @property
    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.alternatives)

    def alternative_labels(self) -> dict[str, str]:
        return {a.id: a.concept.label for a in self.alternatives}

    def ordered_consequences_of(self, alt: Alternative) -> tuple[str, ...]:
        """The alternative's consequences in declaration order of the map."""
        return tuple(cid for cid in self.consequence_ids if cid in alt.consequence_ids)


def validate_scenario(smap: ScenarioMap) -> ScenarioMap:
    """Check all ScenarioMap invariants and return the map unchanged.

    Raises DuplicateId for repeated alternative or consequence ids,
    DanglingConsequence for references to undeclared consequences, and
    EmptyAlternative for an alternative with no consequences.  Idempotent.
    """
    seen: set[str] = set()
    for c in smap.consequences:
        if c.id in seen:
            raise DuplicateId(f"duplicate consequence id {c.id!r}")
        seen.add(c.id)
    declared = seen
    seen = set()
    for a in smap.alternatives:
        if a.id in seen:
            raise DuplicateId(f"duplicate alternative id {a.id!r}")
        seen.add(a.id)
        if not a.consequence_ids:
            raise EmptyAlternative(f"alternative {a.id!r} has no consequences")
        unknown = a.consequence_ids - declared
        if unknown:
            raise DanglingConsequence(
                f"alternative {a.id!r} references undeclared consequence "
                f"{min(unknown)!r}"
            )
    return smap


def is_one_to_one(smap: ScenarioMap) -> bool:
    """True iff every alternative maps to exactly one consequence and no two
    alternatives share one."""
    if any(len(a.consequence_ids) != 1 for a in smap.alternatives):
        return False
    used = [next(iter(a.consequence_ids)) for a in smap.alternatives]
    return len(set(used)) == len(used)


@dataclass(frozen=True)
class CognitiveMap:
    """Directed causal concept graph with designated alternative and
    consequence concepts."""

    concepts: tuple[Concept, ...]
    edges: tuple[tuple[str, str], ...]
    alternative_ids: tuple[str, ...]
    consequence_ids: tuple[str, ...]


def validate_cognitive_map(cmap: CognitiveMap) -> CognitiveMap:
    ids = [c.id for c in cmap.concepts]
    known = set(ids)
    if len(known) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise DuplicateId(f"duplicate concept id {dup!r}")
    for src, dst in cmap.edges:
        if src not in known or dst not in known:
            missing = src if src not in known else dst
            raise SchemaViolation(f"edge references unknown concept {missing!r}")
    for cid in (*cmap.alternative_ids, *cmap.consequence_ids):
        if cid not in known:
            raise SchemaViolation(f"designated concept {cid!r} not declared")
    overlap = set(cmap.alternative_ids) & set(cmap.consequence_ids)
    if overlap:
        raise SchemaViolation(
            f"concept {min(overlap)!r} designated both alternative and consequence"
        )
    if not cmap.alternative_ids:
        raise SchemaViolation("cognitive map declares no alternatives")
    if not cmap.consequence_ids:
        raise SchemaViolation("cognitive map declares no consequences")
    return cmap


@dataclass(frozen=True)
class IntersectionMatrix:
    """Symmetric matrix of shared-face dimensions between hyperedges.

    Entry (h,k), h != k, is |EA_h intersect EA_k| - 1, with -1 as the
    empty-intersection sentinel; the diagonal holds each hyperedge's own
    dimension |EA_h| - 1.
    """

    ids: tuple[str, ...]
    dims: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def max_shared_face(self) -> int:
        """Largest off-diagonal entry (the symbol P); -1 if nothing intersects."""
        n = self.size
        best = -1
        for h in range(n):
            for k in range(h + 1, n):
                if self.dims[h][k] > best:
                    best = self.dims[h][k]
        return best

    def dim_of(self, index: int) -> int:
        return self.dims[index][index]

    def face_dim(self, h: int, k: int) -> int:
        return self.dims[h][k]

    def is_one_to_one(self) -> bool:
        """Matrix-level one-to-one test: all hyperedges are single vertices
        and nothing intersects (how a 1:1 map looks after set reduction)."""
        n = self.size
        return all(self.dims[h][h] == 0 for h in range(n)) and all(
            self.dims[h][k] == -1 for h in range(n) for k in range(n) if h != k
        )


def validate_matrix(m: IntersectionMatrix) -> IntersectionMatrix:
    n = m.size
    if len(m.dims) != n or any(len(row) != n for row in m.dims):
        raise SchemaViolation("intersection matrix is not square")
    if len(set(m.ids)) != n:
        raise DuplicateId("duplicate hyperedge id in intersection matrix")
    for h in range(n):
        if m.dims[h][h] < 0:
            raise SchemaViolation(
                f"diagonal entry for {m.ids[h]!r} must be a dimension >= 0"
            )
        for k in range(n):
            e = m.dims[h][k]
            if e < -1:
                raise SchemaViolation(f"entry ({m.ids[h]}, {m.ids[k]}) below -1")
            if e != m.dims[k][h]:
                raise SchemaViolation(
                    f"matrix not symmetric at ({m.ids[h]}, {m.ids[k]})"
                )
            if h != k and e > min(m.dims[h][h], m.dims[k][k]):
                raise SchemaViolation(
                    f"shared face ({m.ids[h]}, {m.ids[k]}) exceeds a hyperedge dimension"
                )
    return m


@dataclass(frozen=True)
class QClassification:
    """Connectivity classes per level q = 0..Q for one chain variant.

    levels[q] lists the classes at level q; every hyperedge appears in
    exactly one class per level (hyperedges too small to share a q-face sit
    in singleton classes).  Classes are ordered by their smallest member
    index, members by input order.
    """

    variant: str
    ids: tuple[str, ...]
    levels: tuple[tuple[tuple[str, ...], ...], ...]

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def class_counts(self) -> tuple[int, ...]:
        return tuple(len(classes) for classes in self.levels)


@dataclass(frozen=True)
class StructureVector:
    """Per-level class counts [s_0, ..., s_Q]."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if any(e < 1 for e in self.entries):
            raise SchemaViolation("structure vector entries must be >= 1")

    def render(self) -> str:
        return "[" + ", ".join(str(e) for e in self.entries) + "]"


@dataclass(frozen=True)
class ComplexityScore:
    """Aggregate entanglement indicator; exact rational, 0 iff one-to-one."""

    value: Fraction
    all_one_to_one: bool = False

    def exact(self) -> str:
        return str(self.value)

    def decimal(self, places: int = 4) -> str:
        return format_fraction(self.value, places)


def format_fraction(value: Fraction, places: int = 4) -> str:
    """Decimal rendering with round-half-even at `places`, trailing zeros trimmed."""
    with localcontext() as ctx:
        ctx.prec = places + max(len(str(abs(value.numerator))), 28)
        d = Decimal(value.numerator) / Decimal(value.denominator)
        q = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    text = format(q, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


@dataclass(frozen=True)
class LineGraph:
    """Hyperedges condensed to nodes; edges wherever the shared-face
    dimension falls inside the inclusive band."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    band: tuple[int, int]

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class AnalysisReport:
    """Everything derived from one scenario snapshot, digest-stamped."""

    scenario_id: str
    label: str
    digest: str
    matrix: IntersectionMatrix
    threshold_classes: QClassification
    equality_classes: QClassification
    structure_vector: StructureVector | None
    complexity: ComplexityScore | None
    condition: str | None = None
    line_graphs: tuple[LineGraph, ...] = ()
    variant: str = VARIANT_THRESHOLD
    labels: dict[str, str] = field(default_factory=dict)


def _sha256(payload: dict) -> str:
    blob = json.dumps(payload, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(blob.encode("utf-8")).hexdigest()


def digest_scenario(smap: ScenarioMap) -> str:
    """Content digest of a scenario map; stable across re-parses."""
    return _sha256(
        {
            "kind": "scenario",
            "label": smap.label,
            "consequences": [[c.id, c.label] for c in smap.consequences],
            "alternatives": [
                [a.id, a.concept.label, list(smap.ordered_consequences_of(a))]
                for a in smap.alternatives
            ],
        }
    )


def digest_matrix(m: IntersectionMatrix) -> str:
    return _sha256(
        {"kind": "intersection", "ids": list(m.ids), "dims": [list(r) for r in m.dims]}
    )
