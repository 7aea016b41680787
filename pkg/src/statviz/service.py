"""HTTP JSON API and static web UI host.

Endpoints (bodies documented in the README):

  POST /api/sessions                                create + generate
  GET  /api/sessions/{sid}/candidates?top=N
  POST /api/sessions/{sid}/candidates/{cid}/refine  derive a new candidate
  GET  /api/assets/icons?query=...&slot_kind=...
  GET  /api/assets/palettes?query=...
  POST /api/templates        GET /api/templates     persistence
  GET  /api/templates/{tid}/svg
  GET  /api/export/{cid}.svg

Sessions live in memory (TTL-evicted); templates persist to a JSON-lines
file. The model and asset library are immutable and shared; a lock
guards only the session/template maps, so concurrent generations for
different sessions proceed in parallel.
"""

from __future__ import annotations

import itertools
import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .app import Pipeline
from .charts import GraphicKind
from .errors import MissingAsset, NoCandidates, RefineViolation, StatvizError
from .facts import FactGroup
from .persist import candidate_from_dict, candidate_to_dict
from .synth import Candidate, icon_allowed, refine

SESSION_TTL_SECONDS = 3600.0
DEFAULT_TOP = 8


@dataclass
class Session:
    id: str
    statement: str
    seed: int
    group: FactGroup
    ranked_ids: list[str]
    candidates: dict[str, Candidate]
    created: float = field(default_factory=time.time)
    refine_counter: int = 0


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL_SECONDS):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._counter = itertools.count(1)
        self._ttl = ttl

    def new_id(self) -> str:
        return f"s{next(self._counter):06d}"

    def put(self, session: Session) -> None:
        with self._lock:
            self._evict()
            self._sessions[session.id] = session

    def get(self, sid: str) -> Session | None:
        with self._lock:
            self._evict()
            return self._sessions.get(sid)

    def _evict(self) -> None:
        cutoff = time.time() - self._ttl
        for sid in [s for s, sess in self._sessions.items() if sess.created < cutoff]:
            del self._sessions[sid]


class TemplateStore:
    """Durable candidate snapshots: one JSON object per line."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._templates: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    entry = json.loads(line)
                    self._templates[entry["id"]] = entry

    def save(self, candidate: Candidate, label: str, seed: int) -> str:
        with self._lock:
            tid = f"t{len(self._templates) + 1:06d}"
            entry = {
                "id": tid,
                "label": label,
                "created": time.time(),
                "seed": seed,
                "candidate": candidate_to_dict(candidate),
            }
            self._templates[tid] = entry
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
            return tid

    def get(self, tid: str) -> dict | None:
        with self._lock:
            return self._templates.get(tid)

    def list(self) -> list[dict]:
        with self._lock:
            return sorted(self._templates.values(), key=lambda e: e["id"])


def _candidate_json(c: Candidate, sid: str, svg: str | None = None) -> dict:
    from .blueprints import SlotKind

    slots = {rid: g.spec.kind.value for rid, g in c.layout.graphics.items()}
    desc_slots = {
        r.id: {"forms": list(r.forms)}
        for r in c.blueprint.regions()
        if r.slot is SlotKind.DESCRIPTION
    }
    body = {
        "id": f"{sid}.{c.id}",
        "local_id": c.id,
        "blueprint": c.blueprint.id,
        "relation": c.relation.value,
        "palette": c.palette_id,
        "icons": dict(sorted(c.icons.items())),
        "slots": dict(sorted(slots.items())),
        "description_slots": desc_slots,
        "forms_available": sorted(c.descriptions[0].forms().keys()),
        "scores": c.scores.to_dict() if c.scores else None,
        "parent": f"{sid}.{c.parent_id}" if c.parent_id else None,
    }
    if svg is not None:
        body["svg"] = svg
    return body


class ApiServer:
    def __init__(self, pipeline: Pipeline, templates_path: Path, webui_dir: Path | None = None):
        self.pipeline = pipeline
        self.sessions = SessionStore()
        self.templates = TemplateStore(templates_path)
        self.webui_dir = webui_dir
        self._httpd: ThreadingHTTPServer | None = None

    # -- session helpers ------------------------------------------------------

    def create_session(self, statement: str, seed: int, top: int) -> tuple[Session, list[dict]]:
        group, ranked = self.pipeline.generate(statement)
        sid = self.sessions.new_id()
        session = Session(
            id=sid,
            statement=statement,
            seed=seed,
            group=group,
            ranked_ids=[c.id for c in ranked],
            candidates={c.id: c for c in ranked},
        )
        self.sessions.put(session)
        return session, self.candidate_list(session, top)

    def statement_tags(self, statement: str) -> list[dict]:
        tagged = self.pipeline.tagger.tag(statement)
        return [
            {"text": t.text, "start": t.char_start, "end": t.char_end, "label": lab}
            for t, lab in zip(tagged.tokens, tagged.sequence.labels)
        ]

    def candidate_list(self, session: Session, top: int) -> list[dict]:
        out = []
        for local_id in session.ranked_ids[:top]:
            c = session.candidates[local_id]
            svg = self.pipeline.render(c, seed=session.seed).markup
            out.append(_candidate_json(c, session.id, svg))
        return out

    def locate_candidate(self, cid: str) -> tuple[Session, Candidate] | None:
        if "." not in cid:
            return None
        sid, local = cid.split(".", 1)
        session = self.sessions.get(sid)
        if session is None or local not in session.candidates:
            return None
        return session, session.candidates[local]

    def refine_candidate(self, session: Session, parent: Candidate, replace_spec: dict) -> Candidate:
        session.refine_counter += 1
        new_id = f"r{session.refine_counter:03d}"
        child = refine(parent, self.pipeline.assets, replace_spec, new_id,
                       self.pipeline.weights())
        session.candidates[new_id] = child
        # the derived candidate slots in right after its parent
        try:
            at = session.ranked_ids.index(parent.id) + 1
        except ValueError:
            at = len(session.ranked_ids)
        session.ranked_ids.insert(at, new_id)
        return child

    # -- http ----------------------------------------------------------------

    def serve_forever(self, port: int, host: str = "127.0.0.1") -> None:
        self._httpd = ThreadingHTTPServer((host, port), self._handler_class())
        try:
            self._httpd.serve_forever()
        finally:
            self._httpd.server_close()

    def start_background(self, port: int = 0, host: str = "127.0.0.1") -> int:
        """Start on a thread (port 0 = ephemeral); returns the bound port."""
        self._httpd = ThreadingHTTPServer((host, port), self._handler_class())
        thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        thread.start()
        return self._httpd.server_address[1]

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None

    def _handler_class(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):  # quiet
                pass

            # -- plumbing --------------------------------------------------

            def _send(self, code: int, body: bytes, content_type: str) -> None:
                self.send_response(code)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def _json(self, code: int, payload: dict) -> None:
                self._send(code, json.dumps(payload, sort_keys=True).encode("utf-8"),
                           "application/json; charset=utf-8")

            def _error(self, code: int, message: str, **extra) -> None:
                self._json(code, {"error": message, **extra})

            def _body(self) -> dict:
                length = int(self.headers.get("Content-Length") or 0)
                if length == 0:
                    return {}
                try:
                    return json.loads(self.rfile.read(length))
                except json.JSONDecodeError:
                    return {}

            # -- routes ------------------------------------------------------

            def do_GET(self):
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                query = parse_qs(url.query)
                try:
                    if parts[:1] != ["api"]:
                        return self._static(url.path)
                    if len(parts) == 4 and parts[1] == "sessions" and parts[3] == "candidates":
                        return self._get_candidates(parts[2], query)
                    if len(parts) == 3 and parts[1] == "assets" and parts[2] in ("icons", "palettes"):
                        return self._get_assets(parts[2], query)
                    if parts[1:] == ["templates"]:
                        return self._json(200, {"templates": server.templates.list()})
                    if len(parts) == 4 and parts[1] == "templates" and parts[3] == "svg":
                        return self._get_template_svg(parts[2])
                    if len(parts) == 3 and parts[1] == "export" and parts[2].endswith(".svg"):
                        return self._get_export(parts[2][: -len(".svg")])
                    self._error(404, f"no such endpoint: {url.path}")
                except BrokenPipeError:
                    pass
                except Exception as exc:  # keep the server alive
                    self._error(500, f"{exc.__class__.__name__}: {exc}")

            def do_POST(self):
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                try:
                    if parts == ["api", "sessions"]:
                        return self._post_session()
                    if (len(parts) == 6 and parts[1] == "sessions"
                            and parts[3] == "candidates" and parts[5] == "refine"):
                        return self._post_refine(parts[2], parts[4])
                    if parts == ["api", "templates"]:
                        return self._post_template()
                    self._error(404, f"no such endpoint: {url.path}")
                except BrokenPipeError:
                    pass
                except Exception as exc:
                    self._error(500, f"{exc.__class__.__name__}: {exc}")

            # -- endpoint bodies ----------------------------------------------

            def _post_session(self):
                body = self._body()
                statement = (body.get("statement") or "").strip()
                if not statement:
                    return self._error(400, "statement is required")
                seed = int(body.get("seed") or 0)
                top = int(body.get("top") or DEFAULT_TOP)
                try:
                    session, candidates = server.create_session(statement, seed, top)
                except NoCandidates as exc:
                    return self._error(400, "no candidates", diagnostic=str(exc),
                                       reasons=exc.reasons)
                except StatvizError as exc:
                    return self._error(400, "cannot parse statement",
                                       diagnostic=f"{exc.__class__.__name__}: {exc}")
                self._json(200, {
                    "session_id": session.id,
                    "statement": session.statement,
                    "seed": session.seed,
                    "relation": session.group.relation.value,
                    "facts": [f.to_dict() for f in session.group.facts],
                    "tags": server.statement_tags(session.statement),
                    "candidates": candidates,
                })

            def _get_candidates(self, sid: str, query: dict):
                session = server.sessions.get(sid)
                if session is None:
                    return self._error(404, f"unknown session {sid!r}")
                top = int(query.get("top", [DEFAULT_TOP])[0])
                self._json(200, {
                    "session_id": session.id,
                    "candidates": server.candidate_list(session, top),
                })

            def _post_refine(self, sid: str, cid: str):
                session = server.sessions.get(sid)
                if session is None:
                    return self._error(404, f"unknown session {sid!r}")
                local = cid.split(".", 1)[1] if "." in cid else cid
                parent = session.candidates.get(local)
                if parent is None:
                    return self._error(404, f"unknown candidate {cid!r}")
                replace_spec = self._body().get("replace") or {}
                if not replace_spec:
                    return self._error(400, "replace spec is required")
                try:
                    child = server.refine_candidate(session, parent, replace_spec)
                except RefineViolation as exc:
                    return self._error(409, str(exc), constraint=exc.constraint)
                except MissingAsset as exc:
                    return self._error(404, str(exc))
                except ValueError as exc:
                    return self._error(400, str(exc))
                svg = server.pipeline.render(child, seed=session.seed).markup
                self._json(200, {"candidate": _candidate_json(child, session.id, svg)})

            def _get_assets(self, kind: str, query: dict):
                words = (query.get("query", [""])[0]).split()
                k = int(query.get("k", [8])[0])
                assets = server.pipeline.assets
                if kind == "icons":
                    slot_kind = query.get("slot_kind", [None])[0]
                    results = []
                    for m in assets.match_icons(words, k=k):
                        icon = assets.icon(m.asset_id)
                        entry = {
                            "id": icon.id,
                            "similarity": m.similarity,
                            "query_word": m.query_word,
                            "keyword": m.keyword,
                            "aspect": icon.aspect,
                            "flags": {
                                "pictograph_ok": icon.pictograph_ok,
                                "fillable": icon.fillable,
                                "hollow": icon.hollow,
                                "background_ok": icon.background_ok,
                                "represents": icon.represents.value,
                            },
                        }
                        if slot_kind:
                            rule = icon_allowed(GraphicKind(slot_kind), icon)
                            entry["allowed"] = rule is None
                            entry["constraint"] = rule
                        results.append(entry)
                    return self._json(200, {"results": results})
                results = []
                for m in assets.match_palettes(words, k=k):
                    palette = assets.palette(m.asset_id)
                    results.append({
                        "id": palette.id,
                        "similarity": m.similarity,
                        "query_word": m.query_word,
                        "keyword": m.keyword,
                        "keywords": list(palette.keywords),
                        "colors": palette.roles(),
                    })
                self._json(200, {"results": results})

            def _post_template(self):
                body = self._body()
                cid = body.get("candidate_id") or ""
                located = server.locate_candidate(cid)
                if located is None:
                    return self._error(404, f"unknown candidate {cid!r}")
                session, candidate = located
                tid = server.templates.save(candidate, body.get("label") or cid, session.seed)
                self._json(200, {"template_id": tid})

            def _get_template_svg(self, tid: str):
                entry = server.templates.get(tid)
                if entry is None:
                    return self._error(404, f"unknown template {tid!r}")
                candidate = candidate_from_dict(entry["candidate"])
                doc = server.pipeline.render(candidate, seed=entry["seed"])
                self._send(200, doc.to_bytes(), "image/svg+xml")

            def _get_export(self, cid: str):
                located = server.locate_candidate(cid)
                if located is None:
                    return self._error(404, f"unknown candidate {cid!r}")
                session, candidate = located
                doc = server.pipeline.render(candidate, seed=session.seed)
                self._send(200, doc.to_bytes(), "image/svg+xml")

            # -- static web ui -------------------------------------------------

            def _static(self, path: str):
                if server.webui_dir is None:
                    return self._error(404, "no web UI bundled; use the /api endpoints")
                name = "index.html" if path in ("", "/") else path.lstrip("/")
                target = (server.webui_dir / name).resolve()
                if not str(target).startswith(str(server.webui_dir.resolve())) or not target.is_file():
                    return self._error(404, f"no such file {name!r}")
                types = {".html": "text/html; charset=utf-8", ".js": "text/javascript",
                         ".css": "text/css", ".svg": "image/svg+xml", ".json": "application/json"}
                self._send(200, target.read_bytes(), types.get(target.suffix, "application/octet-stream"))

        return Handler
