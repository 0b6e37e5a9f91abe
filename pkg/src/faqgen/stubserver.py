"""HTTP server exposing the deterministic stub backends over the wire protocol.

POST /v1/domain           {"context": s}                                    -> {"domain": s}
POST /v1/questions        {"context": s, "domain": s, "cap": n}             -> {"questions": [s, ...]}
POST /v1/answer_phrase    {"context": s, "question": s}                     -> {"answer_phrase": s}
POST /v1/complete_answer  {"context": s, "question": s, "answer_phrase": s} -> {"answer": s}
GET  /v1/health                                                             -> {"status": "ok"}

Validation failures return 422 with {"error": s}. Responses are pure
functions of the request bodies.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .domains import DOMAINS, DomainLexicon, classify, default_lexicon
from .gateway import (
    DEFAULT_QUESTION_CAP,
    EmptyGeneration,
    stub_answer_phrase,
    stub_complete_answer,
    stub_question_texts,
)


class BindFailure(OSError):
    """The requested bind address could not be acquired."""


class _Invalid(ValueError):
    pass


def _required_text(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str) or not value.strip():
        raise _Invalid(f"blank or missing {key!r}")
    return value


def _domain_endpoint(body: dict, lexicon: DomainLexicon) -> dict:
    context = _required_text(body, "context")
    return {"domain": classify(context, lexicon)}


def _questions_endpoint(body: dict, lexicon: DomainLexicon) -> dict:
    context = _required_text(body, "context")
    domain = body.get("domain", "")
    if domain not in DOMAINS:
        raise _Invalid(f"unknown domain: {domain!r}")
    cap = body.get("cap", DEFAULT_QUESTION_CAP)
    if isinstance(cap, bool) or not isinstance(cap, int) or cap < 1:
        raise _Invalid(f"cap must be an integer >= 1, got {cap!r}")
    return {"questions": stub_question_texts(context, cap)}


def _answer_phrase_endpoint(body: dict, lexicon: DomainLexicon) -> dict:
    context = _required_text(body, "context")
    question = _required_text(body, "question")
    try:
        return {"answer_phrase": stub_answer_phrase(context, question)}
    except EmptyGeneration as exc:
        raise _Invalid(str(exc)) from exc


def _complete_answer_endpoint(body: dict, lexicon: DomainLexicon) -> dict:
    context = _required_text(body, "context")
    question = _required_text(body, "question")
    _required_text(body, "answer_phrase")
    return {"answer": stub_complete_answer(context, question)}


_ROUTES = {
    "/v1/domain": _domain_endpoint,
    "/v1/questions": _questions_endpoint,
    "/v1/answer_phrase": _answer_phrase_endpoint,
    "/v1/complete_answer": _complete_answer_endpoint,
}


class StubBackendServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], lexicon: DomainLexicon):
        self.lexicon = lexicon
        try:
            super().__init__(address, _StubHandler)
        except OSError as exc:
            raise BindFailure(f"cannot bind {address[0]}:{address[1]}: {exc}") from exc


class _StubHandler(BaseHTTPRequestHandler):
    server: StubBackendServer

    def log_message(self, fmt: str, *args) -> None:
        pass

    def do_GET(self) -> None:
        if self.path == "/v1/health":
            self._send(200, {"status": "ok"})
        else:
            self._send(404, {"error": f"no such endpoint: {self.path}"})

    def do_POST(self) -> None:
        handler = _ROUTES.get(self.path)
        if handler is None:
            self._send(404, {"error": f"no such endpoint: {self.path}"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        try:
            body = json.loads(self.rfile.read(length).decode("utf-8") or "null")
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send(422, {"error": "request body is not valid JSON"})
            return
        if not isinstance(body, dict):
            self._send(422, {"error": "request body must be a JSON object"})
            return
        try:
            self._send(200, handler(body, self.server.lexicon))
        except _Invalid as exc:
            self._send(422, {"error": str(exc)})

    def _send(self, status: int, payload: dict) -> None:
        data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def create_server(
    host: str, port: int, lexicon: DomainLexicon | None = None
) -> StubBackendServer:
    """Build a ready-to-serve stub backend bound to (host, port)."""
    return StubBackendServer((host, port), lexicon or default_lexicon())


def serve_stub(bind_address: str, lexicon: DomainLexicon | None = None) -> None:
    """Run the stub backend until interrupted. *bind_address* is ``host:port``."""
    host, _, port_text = bind_address.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bind address must be host:port, got {bind_address!r}")
    server = create_server(host, int(port_text), lexicon)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
