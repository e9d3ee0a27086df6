"""HTTP session service for interactive stepping.

Endpoints (JSON in, JSON out):

* ``POST   /sessions``                create from ``{source|bundle, policy, seed, init}``
* ``GET    /sessions/{id}``           current view
* ``POST   /sessions/{id}/step``      ``{choice: index | "auto"}``; 409 when disabled
* ``POST   /sessions/{id}/flip``      turn the execution direction around
* ``POST   /sessions/{id}/run``       ``{until: "terminal" | {steps: n} | {identifier: m}}``
* ``GET    /sessions/{id}/trace``     the full trace document so far
* ``DELETE /sessions/{id}``           drop the session

Anything not under ``/sessions`` is served from the static asset root when
one is configured, so the same process hosts the browser UI.

Sessions are in-memory. Every session carries its own lock: mutations are
applied one at a time, views are consistent snapshots. A session that hits
an execution error freezes (status ``error``) and keeps serving views so
the inconsistency can be inspected.
"""

from __future__ import annotations

import json
import posixpath
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .engine import Engine, FORWARD
from .harness import replay
from .parser import ParseError, parse
from .preprocess import StaticError, prepare
from .redex import Redex
from .render import render_config, stmt_text
from .redex import stmt_at
from .scheduler import make_scheduler
from .serde import (
    reversal_to_data,
    program_to_data,
    state_to_data,
    trace_document,
    trace_document_from_data,
)
from .state import ExecError


class ServiceError(Exception):
    """An HTTP-mappable failure."""

    def __init__(self, status: int, message: str, **extra: Any):
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **extra}


class Session:
    """One live execution plus the lock that serializes its mutations."""

    def __init__(
        self,
        sid: str,
        source: str,
        engine: Engine,
        policy: str,
        seed: Optional[int],
    ):
        self.id = sid
        self.source = source
        self.engine = engine
        self.policy = policy
        self.seed = seed
        self.scheduler = make_scheduler(policy, seed=seed)
        self.lock = threading.Lock()
        self.error: Optional[str] = None

    # -- views

    def status(self) -> str:
        if self.error is not None:
            return "error"
        if self.engine.enabled():
            return "running"
        return "terminal"

    def _enabled_data(self, redexes: List[Redex]) -> List[Dict[str, Any]]:
        out = []
        for i, r in enumerate(redexes):
            stmt = stmt_at(self.engine.program, r.address)
            span = stmt.span
            out.append(
                {
                    "index": i,
                    "rule": r.rule,
                    "label": r.label,
                    "text": stmt_text(stmt),
                    "address": list(r.address),
                    "uid": r.uid,
                    "origin": r.origin,
                    "span": None
                    if span is None
                    else {"line": span.line, "col": span.col},
                }
            )
        return out

    def view(self) -> Dict[str, Any]:
        engine = self.engine
        state = engine.state
        redexes = [] if self.error is not None else engine.enabled()
        data = {
            "id": self.id,
            "status": self.status(),
            "direction": engine.direction,
            "policy": self.policy,
            "seed": None if self.seed is None else str(self.seed),
            "sequencer": str(state.seq),
            "next_id": str(state.seq) if engine.direction == FORWARD else None,
            "prev_id": str(state.seq - 1) if state.seq > 0 else None,
            "steps_taken": len(engine.trace),
            "program": program_to_data(engine.program),
            "listing": render_config(engine.program),
            "enabled": self._enabled_data(redexes),
            "state": state_to_data(state),
            "delta": reversal_to_data(state),
        }
        if self.error is not None:
            data["error"] = self.error
        return data

    # -- mutations (caller holds the lock)

    def _guard(self) -> None:
        if self.error is not None:
            raise ServiceError(409, f"session is frozen: {self.error}")

    def step(self, choice: Any) -> None:
        self._guard()
        redexes = self.engine.enabled()
        if not redexes:
            raise ServiceError(409, "nothing is enabled")
        if choice in (None, "auto"):
            redex = self.scheduler.choose(self.engine, redexes)
        else:
            try:
                index = int(choice)
            except (TypeError, ValueError):
                raise ServiceError(400, f"choice must be an index or \"auto\", got {choice!r}")
            if not 0 <= index < len(redexes):
                raise ServiceError(
                    409, f"choice {index} is not enabled ({len(redexes)} available)"
                )
            redex = redexes[index]
        try:
            self.engine.step(redex)
        except ExecError as exc:
            self.error = str(exc)
            raise ServiceError(409, f"session is frozen: {exc}")

    def flip(self) -> None:
        self._guard()
        try:
            self.engine.flip()
        except ExecError as exc:
            self.error = str(exc)
            raise ServiceError(409, f"session is frozen: {exc}")

    def run_until(self, until: Any) -> None:
        self._guard()
        if until in (None, "terminal"):
            limit, target = None, None
        elif isinstance(until, dict) and "steps" in until:
            limit, target = int(until["steps"]), None
        elif isinstance(until, dict) and "identifier" in until:
            limit, target = None, int(until["identifier"])
        else:
            raise ServiceError(400, f"bad until clause: {until!r}")
        taken = 0
        while True:
            if limit is not None and taken >= limit:
                return
            redexes = self.engine.enabled()
            if not redexes:
                return
            try:
                event = self.engine.step(self.scheduler.choose(self.engine, redexes))
            except ExecError as exc:
                self.error = str(exc)
                raise ServiceError(409, f"session is frozen: {exc}")
            taken += 1
            if target is not None and event.ident == target:
                return

    def trace(self) -> Dict[str, Any]:
        engine = self.engine
        doc = trace_document(
            self.source,
            engine.trace,
            engine.state,
            init=engine.init,
            policy=self.policy,
            seed=self.seed,
        )
        doc["direction"] = engine.direction
        return doc


class SessionService:
    """All live sessions; thread-safe."""

    def __init__(self) -> None:
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- lifecycle

    def create(self, body: Dict[str, Any]) -> Session:
        policy = body.get("policy", "seeded")
        seed = body.get("seed")
        seed = None if seed in (None, "") else int(seed)
        if policy not in ("seeded", "leftmost"):
            raise ServiceError(400, f"unknown policy {policy!r}")
        if policy == "seeded" and seed is None:
            seed = 0

        if "bundle" in body:
            doc = body["bundle"]
            try:
                parsed = trace_document_from_data(doc)
                prepared = prepare(parse(parsed["source"]))
                engine = replay(prepared, parsed["events"], init=parsed["init"])
            except (ParseError, StaticError) as exc:
                raise ServiceError(400, str(exc), kind=type(exc).__name__)
            except (ExecError, KeyError, ValueError, TypeError) as exc:
                raise ServiceError(400, f"cannot rebuild bundle: {exc}")
            if doc.get("direction", engine.direction) != engine.direction:
                engine.flip()
            source = parsed["source"]
        elif "source" in body:
            source = body["source"]
            init = {k: int(v) for k, v in (body.get("init") or {}).items()}
            try:
                prepared = prepare(parse(source))
                engine = Engine(prepared, init=init)
            except ParseError as exc:
                raise ServiceError(
                    400, str(exc), kind="ParseError", line=exc.line, col=exc.col
                )
            except (StaticError, ExecError, ValueError) as exc:
                raise ServiceError(400, str(exc), kind=type(exc).__name__)
        else:
            raise ServiceError(400, "body needs \"source\" or \"bundle\"")

        session = Session(uuid.uuid4().hex[:12], source, engine, policy, seed)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ServiceError(404, f"no session {sid!r}")
        return session

    def delete(self, sid: str) -> None:
        with self._lock:
            if self._sessions.pop(sid, None) is None:
                raise ServiceError(404, f"no session {sid!r}")

    # -- request-level operations

    def handle(self, method: str, parts: List[str], body: Dict[str, Any]) -> Tuple[int, Any]:
        if parts == ["sessions"]:
            if method != "POST":
                raise ServiceError(405, "POST only")
            session = self.create(body)
            with session.lock:
                return 201, {"id": session.id, "view": session.view()}

        if len(parts) >= 2 and parts[0] == "sessions":
            sid = parts[1]
            rest = parts[2:]
            if not rest:
                if method == "GET":
                    session = self.get(sid)
                    with session.lock:
                        return 200, session.view()
                if method == "DELETE":
                    self.delete(sid)
                    return 204, None
                raise ServiceError(405, "GET or DELETE")
            if rest == ["step"] and method == "POST":
                session = self.get(sid)
                with session.lock:
                    session.step(body.get("choice", "auto"))
                    return 200, session.view()
            if rest == ["flip"] and method == "POST":
                session = self.get(sid)
                with session.lock:
                    session.flip()
                    return 200, session.view()
            if rest == ["run"] and method == "POST":
                session = self.get(sid)
                with session.lock:
                    session.run_until(body.get("until", "terminal"))
                    return 200, session.view()
            if rest == ["trace"] and method == "GET":
                session = self.get(sid)
                with session.lock:
                    return 200, session.trace()
        raise ServiceError(404, "no such endpoint")


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def make_handler(service: SessionService, root: Optional[str]):
    asset_root = Path(root).resolve() if root else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        # -- plumbing

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: Any) -> None:
            if payload is None:
                self.send_response(status)
                self.send_header("Content-Length", "0")
                self.end_headers()
                return
            raw = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(raw)))
            self.end_headers()
            self.wfile.write(raw)

        def _read_body(self) -> Dict[str, Any]:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            try:
                data = json.loads(raw.decode("utf-8"))
            except ValueError:
                raise ServiceError(400, "body is not valid JSON")
            if not isinstance(data, dict):
                raise ServiceError(400, "body must be a JSON object")
            return data

        def _dispatch(self, method: str) -> None:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            try:
                if parts and parts[0] == "sessions":
                    body = self._read_body() if method in ("POST", "PUT") else {}
                    status, payload = service.handle(method, parts, body)
                    self._send_json(status, payload)
                elif method == "GET":
                    self._serve_asset(parts)
                else:
                    self._send_json(404, {"error": "no such endpoint"})
            except ServiceError as exc:
                self._send_json(exc.status, exc.payload)
            except Exception as exc:  # keep the server alive
                self._send_json(500, {"error": f"internal error: {exc}"})

        # -- static assets

        def _serve_asset(self, parts: List[str]) -> None:
            if asset_root is None:
                self._send_json(404, {"error": "no static assets configured"})
                return
            rel = posixpath.normpath("/".join(parts)) if parts else "index.html"
            if rel in (".", ""):
                rel = "index.html"
            candidate = (asset_root / rel).resolve()
            if not str(candidate).startswith(str(asset_root)) or not candidate.is_file():
                self._send_json(404, {"error": f"no asset {rel!r}"})
                return
            data = candidate.read_bytes()
            ctype = _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream")
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

        def do_DELETE(self):
            self._dispatch("DELETE")

    return Handler


def build_server(
    host: str = "127.0.0.1",
    port: int = 8000,
    *,
    root: Optional[str] = None,
    service: Optional[SessionService] = None,
) -> ThreadingHTTPServer:
    """A ready-to-run HTTP server; call ``serve_forever`` on it."""
    service = service or SessionService()
    server = ThreadingHTTPServer((host, port), make_handler(service, root))
    server.service = service  # type: ignore[attr-defined]
    return server
