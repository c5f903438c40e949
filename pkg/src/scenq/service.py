"""HTTP facade: scenario storage with optimistic concurrency plus on-demand
analysis for the companion UI and other clients.

Endpoints (JSON unless noted):

  POST   /scenarios                        create from any set-based format
  GET    /scenarios                        list stored scenarios
  GET    /scenarios/{id}                   stored map + revision + digest
  PATCH  /scenarios/{id}                   apply an edit batch (If-Match: rev)
  GET    /scenarios/{id}/analysis          full report (?variant,min-dim,band,precision)
  GET    /scenarios/{id}/linegraph         one graph (?min-dim=N | band=LO:HI, ?format=dot)
  GET    /scenarios/{id}/compare/{other}   structural diff

Persistence is an append-only JSONL log of scenario revisions replayed at
boot; writes to one scenario are serialized, analyses run on immutable
snapshots.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import analysis
from .errors import (
    InputError,
    MalformedDocument,
    NoSharedFaces,
    ScenqError,
    SchemaViolation,
    ValidationFailure,
)
from .ingestion import (
    FORMAT_INTERSECTION_CSV,
    ScenarioDocument,
    detect_format,
    parse_scenario,
    scenario_to_dict,
)
from .model import (
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    Alternative,
    Concept,
    ScenarioMap,
    digest_scenario,
    validate_scenario,
)


class UnknownScenario(ScenqError):
    pass


class StaleRevision(ScenqError):
    pass


@dataclass(frozen=True)
class StoredScenario:
    id: str
    label: str
    revision: int
    digest: str
    map: ScenarioMap


def apply_edits(smap: ScenarioMap, edits: list) -> ScenarioMap:
    """Apply an edit batch atomically; the result is validated before it is
    returned, so a bad batch leaves no partial state behind."""
    if not isinstance(edits, list) or not edits:
        raise SchemaViolation("edit batch must be a non-empty list")
    consequences = list(smap.consequences)
    alternatives = list(smap.alternatives)

    def _alt_index(aid: str) -> int:
        for i, a in enumerate(alternatives):
            if a.id == aid:
                return i
        raise SchemaViolation(f"unknown alternative {aid!r}")

    for edit in edits:
        if not isinstance(edit, dict) or "op" not in edit:
            raise SchemaViolation("each edit must be an object with an 'op'")
        op = edit["op"]
        eid = edit.get("id")
        if not isinstance(eid, str) or not eid:
            raise SchemaViolation(f"edit {op!r} needs a string 'id'")
        if op == "add-consequence":
            consequences.append(Concept(eid, edit.get("label", "")))
        elif op == "remove-consequence":
            if eid not in [c.id for c in consequences]:
                raise SchemaViolation(f"unknown consequence {eid!r}")
            consequences = [c for c in consequences if c.id != eid]
            alternatives = [
                Alternative(a.concept, a.consequence_ids - {eid}) for a in alternatives
            ]
        elif op == "add-alternative":
            raw = edit.get("consequences")
            if not isinstance(raw, list):
                raise SchemaViolation(f"add-alternative {eid!r} needs 'consequences'")
            alternatives.append(
                Alternative(Concept(eid, edit.get("label", "")), frozenset(raw))
            )
        elif op == "remove-alternative":
            alternatives.pop(_alt_index(eid))
        elif op == "relink":
            raw = edit.get("consequences")
            if not isinstance(raw, list):
                raise SchemaViolation(f"relink {eid!r} needs 'consequences'")
            i = _alt_index(eid)
            alternatives[i] = Alternative(alternatives[i].concept, frozenset(raw))
        else:
            raise SchemaViolation(f"unknown edit op {op!r}")

    return validate_scenario(
        ScenarioMap(smap.label, tuple(consequences), tuple(alternatives))
    )


class ScenarioStore:
    """In-memory index over an append-only revision log."""

    def __init__(self, data_dir: str | None = None):
        self._lock = threading.Lock()
        self._scenarios: dict[str, StoredScenario] = {}
        self._next = 1
        self._log_path: Path | None = None
        if data_dir is not None:
            Path(data_dir).mkdir(parents=True, exist_ok=True)
            self._log_path = Path(data_dir) / "scenarios.log"
            self._replay()

    def _replay(self):
        if self._log_path is None or not self._log_path.exists():
            return
        from .ingestion import parse_scenario_json

        for line in self._log_path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            smap = parse_scenario_json(
                json.dumps(entry["scenario"]).encode("utf-8")
            )
            self._scenarios[entry["id"]] = StoredScenario(
                entry["id"], entry["label"], entry["revision"],
                digest_scenario(smap), smap,
            )
            suffix = entry["id"].lstrip("s")
            if suffix.isdigit():
                self._next = max(self._next, int(suffix) + 1)

    def _append_log(self, stored: StoredScenario):
        if self._log_path is None:
            return
        entry = {
            "id": stored.id,
            "revision": stored.revision,
            "label": stored.label,
            "scenario": scenario_to_dict(stored.map),
        }
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")

    def list(self) -> list[StoredScenario]:
        with self._lock:
            return list(self._scenarios.values())

    def get(self, sid: str) -> StoredScenario:
        with self._lock:
            if sid not in self._scenarios:
                raise UnknownScenario(f"no scenario {sid!r}")
            return self._scenarios[sid]

    def create(self, smap: ScenarioMap, label: str | None = None) -> StoredScenario:
        with self._lock:
            sid = f"s{self._next}"
            self._next += 1
            stored = StoredScenario(
                sid, label or smap.label, 1, digest_scenario(smap), smap
            )
            self._scenarios[sid] = stored
            self._append_log(stored)
            return stored

    def mutate(self, sid: str, expected_revision: int, edits: list) -> StoredScenario:
        with self._lock:
            if sid not in self._scenarios:
                raise UnknownScenario(f"no scenario {sid!r}")
            current = self._scenarios[sid]
            if current.revision != expected_revision:
                raise StaleRevision(
                    f"revision precondition {expected_revision} does not match "
                    f"current revision {current.revision}"
                )
            edited = apply_edits(current.map, edits)
            stored = StoredScenario(
                sid, current.label, current.revision + 1,
                digest_scenario(edited), edited,
            )
            self._scenarios[sid] = stored
            self._append_log(stored)
            return stored


def _error_body(name: str, detail: str) -> dict:
    return {"error": name, "detail": detail}


def _single_int(params: dict, key: str, default=None):
    values = params.get(key)
    if not values:
        return default
    try:
        return int(values[-1])
    except ValueError:
        raise SchemaViolation(f"query parameter {key!r} must be an integer") from None


def _bands(params: dict) -> list[tuple[int, int]]:
    bands = []
    for raw in params.get("band", []):
        try:
            lo, hi = raw.split(":")
            bands.append((int(lo), int(hi)))
        except ValueError:
            raise SchemaViolation(f"band must look like LO:HI, got {raw!r}") from None
    return bands


def _min_dims(params: dict) -> list[int]:
    try:
        return [int(raw) for raw in params.get("min-dim", [])]
    except ValueError:
        raise SchemaViolation("min-dim must be an integer") from None


def _variant(params: dict) -> str:
    raw = params.get("variant", ["threshold"])[-1]
    table = {
        "threshold": VARIANT_THRESHOLD,
        "equality": VARIANT_EQUALITY,
        VARIANT_THRESHOLD: VARIANT_THRESHOLD,
        VARIANT_EQUALITY: VARIANT_EQUALITY,
    }
    if raw not in table:
        raise SchemaViolation(f"unknown variant {raw!r}")
    return table[raw]


def make_handler(store: ScenarioStore, ui_dir: str | None = None):
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "scenq"

        def log_message(self, *args):
            if os.environ.get("SCENQ_HTTP_LOG"):
                super().log_message(*args)

        # -- plumbing ----------------------------------------------------

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods",
                             "GET, POST, PATCH, OPTIONS")
            self.send_header("Access-Control-Allow-Headers",
                             "Content-Type, If-Match")

        def _send_json(self, status: int, body: dict, location: str | None = None):
            blob = (json.dumps(body, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(blob)))
            if location:
                self.send_header("Location", location)
            self._cors()
            self.end_headers()
            self.wfile.write(blob)

        def _send_text(self, status: int, text: str, content_type: str):
            blob = text.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(blob)))
            self._cors()
            self.end_headers()
            self.wfile.write(blob)

        def _body(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length else b""

        # -- verbs -------------------------------------------------------

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_POST(self):
            url = urlparse(self.path)
            if url.path.rstrip("/") != "/scenarios":
                self._send_json(404, _error_body("NotFound", self.path))
                return
            try:
                payload = self._body()
                fmt = detect_format(payload)
                if fmt == FORMAT_INTERSECTION_CSV:
                    raise SchemaViolation(
                        "intersection matrices cannot be stored as scenarios; "
                        "analyze them through the CLI"
                    )
                smap = parse_scenario(ScenarioDocument(fmt, payload))
                stored = store.create(smap)
            except (MalformedDocument, SchemaViolation, ValidationFailure) as exc:
                self._send_json(400, _error_body(exc.name, str(exc)))
                return
            self._send_json(
                201,
                {
                    "id": stored.id,
                    "label": stored.label,
                    "revision": stored.revision,
                    "digest": stored.digest,
                },
                location=f"/scenarios/{stored.id}",
            )

        def do_PATCH(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if len(parts) != 2 or parts[0] != "scenarios":
                self._send_json(404, _error_body("NotFound", self.path))
                return
            sid = parts[1]
            if_match = self.headers.get("If-Match")
            if if_match is None:
                self._send_json(
                    428,
                    _error_body("PreconditionRequired",
                                "PATCH needs an If-Match revision header"),
                )
                return
            try:
                expected = int(if_match.strip().strip('"'))
            except ValueError:
                self._send_json(
                    400, _error_body("SchemaViolation", "If-Match must be a revision"))
                return
            try:
                obj = json.loads(self._body().decode("utf-8") or "{}")
                if not isinstance(obj, dict):
                    raise SchemaViolation("PATCH body must be an object")
                stored = store.mutate(sid, expected, obj.get("edits"))
            except UnknownScenario as exc:
                self._send_json(404, _error_body(exc.name, str(exc)))
            except StaleRevision as exc:
                self._send_json(409, _error_body(exc.name, str(exc)))
            except ValidationFailure as exc:
                self._send_json(422, _error_body(exc.name, str(exc)))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                self._send_json(400, _error_body("MalformedDocument", str(exc)))
            except SchemaViolation as exc:
                self._send_json(400, _error_body(exc.name, str(exc)))
            else:
                self._send_json(
                    200,
                    {"id": stored.id, "revision": stored.revision,
                     "digest": stored.digest},
                )

        def do_GET(self):
            url = urlparse(self.path)
            params = parse_qs(url.query)
            parts = [p for p in url.path.split("/") if p]
            try:
                if not parts:
                    self._send_json(200, {
                        "service": "scenq",
                        "endpoints": [
                            "POST /scenarios", "GET /scenarios",
                            "GET /scenarios/{id}", "PATCH /scenarios/{id}",
                            "GET /scenarios/{id}/analysis",
                            "GET /scenarios/{id}/linegraph",
                            "GET /scenarios/{id}/compare/{other}",
                        ],
                    })
                elif parts[0] == "ui" and ui_root is not None:
                    self._serve_ui(parts[1:])
                elif parts[0] != "scenarios":
                    self._send_json(404, _error_body("NotFound", self.path))
                elif len(parts) == 1:
                    self._send_json(200, {
                        "scenarios": [
                            {"id": s.id, "label": s.label, "revision": s.revision,
                             "digest": s.digest}
                            for s in sorted(store.list(), key=lambda s: s.id)
                        ]
                    })
                elif len(parts) == 2:
                    s = store.get(parts[1])
                    self._send_json(200, {
                        "id": s.id, "label": s.label, "revision": s.revision,
                        "digest": s.digest, "scenario": scenario_to_dict(s.map),
                    })
                elif len(parts) == 3 and parts[2] == "analysis":
                    self._analysis(parts[1], params)
                elif len(parts) == 3 and parts[2] == "linegraph":
                    self._linegraph(parts[1], params)
                elif len(parts) == 4 and parts[2] == "compare":
                    self._compare(parts[1], parts[3])
                else:
                    self._send_json(404, _error_body("NotFound", self.path))
            except UnknownScenario as exc:
                self._send_json(404, _error_body(exc.name, str(exc)))
            except (SchemaViolation, InputError) as exc:
                self._send_json(400, _error_body(exc.name, str(exc)))

        # -- GET helpers ---------------------------------------------------

        def _analysis(self, sid: str, params: dict):
            s = store.get(sid)
            report = analysis.build_report(
                s.map,
                scenario_id=s.id,
                label=s.label,
                variant=_variant(params),
                min_dims=_min_dims(params),
                bands=_bands(params),
            )
            places = _single_int(params, "precision", 4)
            body = {"revision": s.revision}
            body.update(analysis.report_to_dict(report, places))
            if report.condition is not None:
                body = {"error": report.condition, **body}
                self._send_json(422, body)
            else:
                self._send_json(200, body)

        def _linegraph(self, sid: str, params: dict):
            from .linegraph import export_dot, generalized_line_graph, threshold_line_graph

            s = store.get(sid)
            matrix = analysis.intersection_matrix(s.map)
            min_dim = _single_int(params, "min-dim")
            bands = _bands(params)
            if min_dim is not None:
                graph = threshold_line_graph(matrix, min_dim)
            elif bands:
                graph = generalized_line_graph(matrix, *bands[-1])
            else:
                raise SchemaViolation("linegraph needs min-dim or band")
            if params.get("format", [""])[-1] == "dot":
                self._send_text(200, export_dot(graph), "text/vnd.graphviz")
            else:
                self._send_json(200, {
                    "revision": s.revision,
                    "digest": s.digest,
                    "graph": analysis.line_graph_to_dict(graph),
                })

        def _compare(self, sid_a: str, sid_b: str):
            a = store.get(sid_a)
            b = store.get(sid_b)
            diff = analysis.compare_reports(
                analysis.build_report(a.map, scenario_id=a.id, label=a.label),
                analysis.build_report(b.map, scenario_id=b.id, label=b.label),
            )
            body = {"revision_a": a.revision, "revision_b": b.revision}
            body.update(analysis.diff_to_dict(diff))
            self._send_json(200, body)

        def _serve_ui(self, rel_parts: list[str]):
            rel = "/".join(rel_parts) or "index.html"
            target = (ui_root / rel).resolve()
            if ui_root not in target.parents and target != ui_root:
                self._send_json(404, _error_body("NotFound", rel))
                return
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                self._send_json(404, _error_body("NotFound", rel))
                return
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self._send_text(200, target.read_text("utf-8"), ctype)

    return Handler


def make_server(store: ScenarioStore, host: str = "127.0.0.1", port: int = 0,
                ui_dir: str | None = None) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), make_handler(store, ui_dir))


def run_from_cli(listen: str | None, data_dir: str | None,
                 ui_dir: str | None) -> int:
    listen = listen or os.environ.get("SCENQ_LISTEN", "127.0.0.1:8765")
    data_dir = data_dir or os.environ.get("SCENQ_DATA_DIR") or None
    ui_dir = ui_dir or os.environ.get("SCENQ_UI_DIR") or None
    host, _, port_text = listen.rpartition(":")
    if not host:
        raise InputError(f"--listen must look like HOST:PORT, got {listen!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise InputError(f"invalid port {port_text!r}") from None
    store = ScenarioStore(data_dir)
    server = make_server(store, host, port, ui_dir)
    bound_host, bound_port = server.server_address[:2]
    print(f"listening on http://{bound_host}:{bound_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
