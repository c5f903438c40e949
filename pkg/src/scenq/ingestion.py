"""Parsers for the four supported input encodings, plus the reduction of
cognitive maps to scenario maps via causal reachability.

Formats:
  scenario-json    - {"label", "consequences": [{"id","label"}...],
                      "alternatives": [{"id","label","consequences":[ids]}...]}
  incidence-csv    - header of consequence ids; one row per alternative:
                      its id followed by strict "0"/"1" cells
  intersection-csv - header of hyperedge ids; symmetric integer rows with the
                      same ids as row labels; diagonal = hyperedge dimensions;
                      -1 = empty intersection (0 means one shared vertex)
  cogmap-json      - {"concepts": [{"id","label"}...], "edges": [{"from","to"}...],
                      "alternatives": [ids], "consequences": [ids]}
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

from .errors import (
    MalformedDocument,
    SchemaViolation,
    UnreachableAlternative,
)
from .model import (
    Alternative,
    CognitiveMap,
    Concept,
    IntersectionMatrix,
    ScenarioMap,
    validate_cognitive_map,
    validate_matrix,
    validate_scenario,
)

FORMAT_SCENARIO_JSON = "scenario-json"
FORMAT_INCIDENCE_CSV = "incidence-csv"
FORMAT_INTERSECTION_CSV = "intersection-csv"
FORMAT_COGMAP_JSON = "cogmap-json"
FORMATS = (
    FORMAT_SCENARIO_JSON,
    FORMAT_INCIDENCE_CSV,
    FORMAT_INTERSECTION_CSV,
    FORMAT_COGMAP_JSON,
)


class IgnoredEdgeSignWarning(UserWarning):
    """Raised once per cogmap document whose edges carry +/- signs."""


@dataclass(frozen=True)
class ScenarioDocument:
    """A raw payload tagged with the format it claims to be."""

    format: str
    payload: bytes
    label: str | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise SchemaViolation(f"unknown document format {self.format!r}")


def _decode(payload: bytes) -> str:
    if not payload.strip():
        raise MalformedDocument("empty document")
    try:
        return payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"payload is not valid UTF-8: {exc}") from None


def _load_json(payload: bytes) -> dict:
    try:
        obj = json.loads(_decode(payload))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaViolation("top-level JSON value must be an object")
    return obj


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise SchemaViolation(f"{where} is missing required field {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaViolation(f"{where} field {key!r} has the wrong type")
    return value


def _concept(entry, where: str) -> Concept:
    if not isinstance(entry, dict):
        raise SchemaViolation(f"{where} entries must be objects")
    cid = _require(entry, "id", str, where)
    label = entry.get("label", "")
    if not isinstance(label, str):
        raise SchemaViolation(f"{where} label must be a string")
    return Concept(cid, label)


def parse_scenario_json(payload: bytes, label: str | None = None) -> ScenarioMap:
    obj = _load_json(payload)
    doc_label = obj.get("label", "")
    if not isinstance(doc_label, str):
        raise SchemaViolation("scenario label must be a string")
    consequences = tuple(
        _concept(e, "consequences") for e in _require(obj, "consequences", list, "scenario")
    )
    alternatives = []
    for entry in _require(obj, "alternatives", list, "scenario"):
        concept = _concept(entry, "alternatives")
        raw = _require(entry, "consequences", list, f"alternative {concept.id!r}")
        if not all(isinstance(c, str) for c in raw):
            raise SchemaViolation(
                f"alternative {concept.id!r} consequence ids must be strings"
            )
        alternatives.append(Alternative(concept, frozenset(raw)))
    smap = ScenarioMap(label or doc_label, consequences, tuple(alternatives))
    return validate_scenario(smap)


def _csv_rows(payload: bytes) -> list[list[str]]:
    text = _decode(payload)
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if len(rows) < 2:
        raise MalformedDocument("CSV needs a header row and at least one data row")
    return rows


def parse_incidence_csv(payload: bytes, label: str | None = None) -> ScenarioMap:
    rows = _csv_rows(payload)
    pc_ids = rows[0][1:]
    if not pc_ids:
        raise SchemaViolation("incidence header declares no consequence columns")
    consequences = tuple(Concept(cid) for cid in pc_ids)
    alternatives = []
    for row in rows[1:]:
        if len(row) != len(pc_ids) + 1:
            raise SchemaViolation(f"row {row[0]!r} has {len(row) - 1} cells, "
                                  f"expected {len(pc_ids)}")
        members = set()
        for cid, cell in zip(pc_ids, row[1:]):
            if cell == "1":
                members.add(cid)
            elif cell != "0":
                raise SchemaViolation(
                    f"incidence cell ({row[0]}, {cid}) must be exactly '0' or '1', "
                    f"got {cell!r}"
                )
        alternatives.append(Alternative(Concept(row[0]), frozenset(members)))
    smap = ScenarioMap(label or "", consequences, tuple(alternatives))
    return validate_scenario(smap)


def parse_intersection_csv(payload: bytes, label: str | None = None) -> IntersectionMatrix:
    rows = _csv_rows(payload)
    ids = tuple(rows[0][1:])
    if not ids:
        raise SchemaViolation("intersection header declares no hyperedge columns")
    if len(rows) - 1 != len(ids):
        raise SchemaViolation("intersection matrix must have one row per header id")
    dims = []
    for expected_id, row in zip(ids, rows[1:]):
        if row[0] != expected_id:
            raise SchemaViolation(
                f"row label {row[0]!r} does not match header order ({expected_id!r})"
            )
        if len(row) != len(ids) + 1:
            raise SchemaViolation(f"row {row[0]!r} has the wrong number of cells")
        try:
            dims.append(tuple(int(cell) for cell in row[1:]))
        except ValueError:
            raise SchemaViolation(f"non-integer cell in row {row[0]!r}") from None
    return validate_matrix(IntersectionMatrix(ids, tuple(dims)))


def parse_cogmap_json(payload: bytes, label: str | None = None) -> CognitiveMap:
    obj = _load_json(payload)
    concepts = tuple(
        _concept(e, "concepts") for e in _require(obj, "concepts", list, "cogmap")
    )
    signed = False
    edges = []
    for entry in _require(obj, "edges", list, "cogmap"):
        if not isinstance(entry, dict):
            raise SchemaViolation("edges entries must be objects")
        src = _require(entry, "from", str, "edge")
        dst = _require(entry, "to", str, "edge")
        if entry.get("sign") not in (None, "+"):
            signed = True
        edges.append((src, dst))
    for key in ("alternatives", "consequences"):
        if not all(isinstance(i, str) for i in _require(obj, key, list, "cogmap")):
            raise SchemaViolation(f"cogmap {key} must be a list of ids")
    if signed:
        warnings.warn(
            "causal edge signs are ignored; only unweighted linkage is analyzed",
            IgnoredEdgeSignWarning,
            stacklevel=2,
        )
    cmap = CognitiveMap(
        concepts,
        tuple(edges),
        tuple(obj["alternatives"]),
        tuple(obj["consequences"]),
    )
    return validate_cognitive_map(cmap)


def reduce_cognitive_map(cmap: CognitiveMap, label: str | None = None) -> ScenarioMap:
    """Collapse a causal map to the alternatives-to-consequences mapping.

    Each alternative's consequence set is exactly the designated consequences
    reachable from it along directed edges; intermediate concepts are passed
    through, cycles are harmless.  Raises UnreachableAlternative if some
    alternative reaches no consequence at all.
    """
    validate_cognitive_map(cmap)
    succ: dict[str, list[str]] = {c.id: [] for c in cmap.concepts}
    for src, dst in cmap.edges:
        succ[src].append(dst)
    targets = set(cmap.consequence_ids)
    labels = {c.id: c.label for c in cmap.concepts}

    alternatives = []
    for aid in cmap.alternative_ids:
        reachable: set[str] = set()
        stack = list(succ[aid])
        seen = {aid}
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if node in targets:
                reachable.add(node)
            stack.extend(succ[node])
        if not reachable:
            raise UnreachableAlternative(
                f"alternative {aid!r} reaches no designated consequence"
            )
        alternatives.append(Alternative(Concept(aid, labels[aid]), frozenset(reachable)))

    consequences = tuple(Concept(cid, labels[cid]) for cid in cmap.consequence_ids)
    return validate_scenario(ScenarioMap(label or "", consequences, tuple(alternatives)))


_PARSERS = {
    FORMAT_SCENARIO_JSON: parse_scenario_json,
    FORMAT_INCIDENCE_CSV: parse_incidence_csv,
    FORMAT_INTERSECTION_CSV: parse_intersection_csv,
    FORMAT_COGMAP_JSON: parse_cogmap_json,
}


def parse_scenario(doc: ScenarioDocument) -> ScenarioMap | IntersectionMatrix:
    """Parse a tagged document; cogmap-json is reduced to a ScenarioMap."""
    parsed = _PARSERS[doc.format](doc.payload, doc.label)
    if doc.format == FORMAT_COGMAP_JSON:
        return reduce_cognitive_map(parsed, doc.label)
    return parsed


def detect_format(payload: bytes) -> str:
    """Sniff which of the four encodings a payload uses.

    JSON objects are cogmap-json iff they carry an "edges" key.  A CSV is
    intersection-csv iff its row labels repeat the header ids (a square
    matrix over one id set); otherwise incidence-csv.
    """
    text = _decode(payload)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"invalid JSON: {exc}") from None
        if isinstance(obj, dict) and "edges" in obj:
            return FORMAT_COGMAP_JSON
        return FORMAT_SCENARIO_JSON
    rows = _csv_rows(payload)
    header_ids = rows[0][1:]
    row_ids = [row[0] for row in rows[1:]]
    if header_ids and header_ids == row_ids:
        return FORMAT_INTERSECTION_CSV
    return FORMAT_INCIDENCE_CSV


def load_document(path: str, format: str | None = None, label: str | None = None
                  ) -> ScenarioDocument:
    with open(path, "rb") as fh:
        payload = fh.read()
    return ScenarioDocument(format or detect_format(payload), payload, label)


def scenario_to_dict(smap: ScenarioMap) -> dict:
    """scenario-json layout; parse_scenario_json inverts it exactly."""
    return {
        "label": smap.label,
        "consequences": [{"id": c.id, "label": c.label} for c in smap.consequences],
        "alternatives": [
            {
                "id": a.id,
                "label": a.concept.label,
                "consequences": list(smap.ordered_consequences_of(a)),
            }
            for a in smap.alternatives
        ],
    }


def serialize_scenario(smap: ScenarioMap) -> str:
    return json.dumps(scenario_to_dict(smap), indent=2, ensure_ascii=False) + "\n"
