"""HTTP/JSON service exposing sessions, analytics, and the rule tooling.

Each live session is backed by its own message bus; the ontology, rule
set, bank, and event log are shared across sessions.  Error responses
always carry `{"code": ..., "message": ...}` where code is the domain
error class name.

A scripted clock can be injected per request through the `X-Clock` header
(comma-separated ISO-8601 UTC timestamps); queued moments are consumed by
the ask/answer stamps of that session before the server falls back to
wall-clock time.  This exists for reproducible end-to-end runs and is
harmless in normal operation.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime
from typing import Deque, Dict, Optional

from fastapi import FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import rulecalc
from .errors import (
    EmptyAnswer,
    IncompleteOutcome,
    LoadError,
    BindError,
    PreassessError,
    UnknownDesiredConcept,
    UnknownSession,
    WrongPhase,
)
from .ontology import OntologyGraph, load_ontology
from .question_bank import QuestionBank, load_bank
from .rules import ClassifyPolicy, Recommendation, RuleSet, generate_rules, \
    render_rules_text, rules_to_json
from .session import Phase, PreAssessmentSession, system_clock
from .student_log import EventLog, SessionSummary, analyze, format_timestamp, \
    parse_timestamp

DEFAULT_SESSION_TIMEOUT = 30 * 60  # seconds of idleness before a session dies


@dataclass
class ServerConfig:
    ontology_path: str
    bank_path: str
    log_path: str
    port: int = 8000
    host: str = "127.0.0.1"
    policy: ClassifyPolicy = field(default_factory=ClassifyPolicy)
    k_max: int = rulecalc.DEFAULT_K_MAX
    max_messages: int = 10_000
    session_timeout: float = DEFAULT_SESSION_TIMEOUT


class ClockFeed:
    """Per-session clock: scripted moments first, wall clock afterwards."""

    def __init__(self):
        self._moments: Deque[datetime] = deque()

    def push_header(self, header: Optional[str]) -> None:
        if not header:
            return
        for chunk in header.split(","):
            chunk = chunk.strip()
            if chunk:
                self._moments.append(parse_timestamp(chunk))

    def __call__(self) -> datetime:
        if self._moments:
            return self._moments.popleft()
        return system_clock()


@dataclass
class ApiSession:
    id: str
    session: PreAssessmentSession
    clock: ClockFeed
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_touched: float = field(default_factory=time.monotonic)


class StartSessionRequest(BaseModel):
    student: str
    desired: str


class AnswerRequest(BaseModel):
    text: str


_STATUS_BY_ERROR = {
    UnknownDesiredConcept: 422,
    EmptyAnswer: 422,
    WrongPhase: 409,
    IncompleteOutcome: 409,
    UnknownSession: 404,
}


def create_app(config: ServerConfig) -> FastAPI:
    """Load all inputs eagerly (fail fast) and build the application."""
    graph = _load_file(config.ontology_path, "ontology", load_ontology)
    bank = _load_file(
        config.bank_path, "question bank", lambda text: load_bank(text, graph)
    )
    try:
        ruleset = generate_rules(graph, config.policy)
    except PreassessError as exc:
        raise LoadError(f"cannot generate rules: {exc}") from exc
    log = EventLog(config.log_path)

    app = FastAPI(title="preassess", version="0.1.0")
    # The web client may be served from its own origin (static file server);
    # there is no auth layer, so open CORS costs nothing.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = _ServiceState(config, graph, ruleset, bank, log)

    @app.exception_handler(PreassessError)
    async def domain_error(_req: Request, exc: PreassessError):
        status = 400
        for klass, code in _STATUS_BY_ERROR.items():
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationError", "message": str(exc.errors())},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def start_session(
        body: StartSessionRequest,
        x_clock: Optional[str] = Header(default=None),
    ):
        return state.start_session(body.student, body.desired, x_clock)

    @app.get("/sessions/{session_id}/question")
    def current_question(session_id: str):
        return state.current_question(session_id)

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(
        session_id: str,
        body: AnswerRequest,
        x_clock: Optional[str] = Header(default=None),
    ):
        return state.submit_answer(session_id, body.text, x_clock)

    @app.get("/sessions/{session_id}/result")
    def session_result(session_id: str):
        return state.session_result(session_id)

    @app.get("/students/{student}/history")
    def student_history(student: str):
        summaries = analyze(log.load_history(student))
        return {
            "student": student,
            "sessions": [_summary_json(s) for s in summaries],
        }

    @app.get("/rules/estimate")
    def rules_estimate(c: int, n: int):
        return {"c": c, "n": n, "r": rulecalc.estimate_rules(c, n)}

    @app.get("/rules/sweep")
    def rules_sweep(c: str, n: str):
        grid = rulecalc.sweep(
            _parse_range(c), _parse_range(n), k_max=config.k_max
        )
        return PlainTextResponse(
            rulecalc.emit_dataset_csv(grid), media_type="text/csv"
        )

    @app.get("/rules")
    def rules_dump(format: str = "json"):
        if format == "text":
            return PlainTextResponse(render_rules_text(ruleset))
        if format == "json":
            return Response(
                content=rules_to_json(ruleset), media_type="application/json"
            )
        raise RequestValidationError(
            [{"loc": ("query", "format"), "msg": "must be json or text"}]
        )

    @app.get("/ontology")
    def ontology_dump():
        return _graph_json(graph)

    return app


class _ServiceState:
    """Shared stores plus the live-session registry."""

    def __init__(self, config, graph, ruleset, bank, log):
        self.config = config
        self.graph: OntologyGraph = graph
        self.ruleset: RuleSet = ruleset
        self.bank: QuestionBank = bank
        self.log: EventLog = log
        self.sessions: Dict[str, ApiSession] = {}
        self._registry_lock = threading.Lock()

    # -- session plumbing ---------------------------------------------------

    def start_session(self, student: str, desired: str,
                      clock_header: Optional[str]):
        clock = ClockFeed()
        clock.push_header(clock_header)
        session = PreAssessmentSession(
            student=student,
            desired_raw=desired,
            graph=self.graph,
            ruleset=self.ruleset,
            bank=self.bank,
            log=self.log,
            policy=self.ruleset.policy,
            clock=clock,
        )
        api_session = ApiSession(id=uuid.uuid4().hex, session=session,
                                 clock=clock)
        with self._registry_lock:
            self.sessions[api_session.id] = api_session
        with api_session.lock:
            question = None
            if session.state.phase is Phase.QUIZ_SORTED:
                question = _prompt_json(session.next_question(), session)
            return {
                "id": api_session.id,
                "student": session.state.student,
                "desired": session.state.desired,
                "phase": session.state.phase.value,
                "question": question,
                "recommendation": _recommendation_json(session.recommendation),
            }

    def submit_answer(self, session_id: str, text: str,
                      clock_header: Optional[str]):
        api_session = self._live_session(session_id)
        with api_session.lock:
            session = api_session.session
            api_session.clock.push_header(clock_header)
            feedback = session.submit_answer(text)
            question = None
            recommendation = None
            if session.quiz_finished():
                recommendation = _recommendation_json(session.finalize())
            else:
                question = _prompt_json(session.next_question(), session)
            return {
                "feedback": {
                    "leaf": feedback.leaf,
                    "attempt": feedback.attempt,
                    "outcome": feedback.outcome.value,
                    "message": feedback.message,
                },
                "question": question,
                "recommendation": recommendation,
                "phase": session.state.phase.value,
            }

    def current_question(self, session_id: str):
        api_session = self._live_session(session_id)
        with api_session.lock:
            session = api_session.session
            if session.state.phase is Phase.DONE:
                return {
                    "status": "done",
                    "question": None,
                    "recommendation": _recommendation_json(
                        session.recommendation
                    ),
                }
            current = session.state.current
            if current is None:
                raise WrongPhase("no question is currently asked")
            leaf, attempt = current
            item = self.bank.item_for(leaf)
            return {
                "status": "active",
                "question": {
                    "leaf": leaf,
                    "attempt": attempt,
                    "max_attempts": session.policy.max_attempts,
                    "prompt": item.prompt,
                },
                "recommendation": None,
            }

    def session_result(self, session_id: str):
        api_session = self._live_session(session_id)
        with api_session.lock:
            session = api_session.session
            if session.recommendation is None:
                raise IncompleteOutcome("session has not been classified yet")
            return {
                "phase": session.state.phase.value,
                "recommendation": _recommendation_json(session.recommendation),
            }

    def _live_session(self, session_id: str) -> ApiSession:
        now = time.monotonic()
        with self._registry_lock:
            api_session = self.sessions.get(session_id)
            if api_session is None:
                raise UnknownSession(f"no session {session_id!r}")
            if now - api_session.last_touched > self.config.session_timeout:
                del self.sessions[session_id]
                raise UnknownSession(f"session {session_id!r} expired")
            api_session.last_touched = now
            return api_session


# --- serialization helpers --------------------------------------------------

def _prompt_json(prompt, session) -> Optional[dict]:
    if prompt is None:
        return None
    return {
        "leaf": prompt.leaf,
        "attempt": prompt.attempt,
        "max_attempts": prompt.max_attempts,
        "prompt": prompt.prompt,
    }


def _recommendation_json(rec: Optional[Recommendation]) -> Optional[dict]:
    if rec is None:
        return None
    return {
        "verdict": rec.verdict.value,
        "targets": [
            {"concept": concept, "url": url} for concept, url in rec.targets
        ],
    }


def _summary_json(summary: SessionSummary) -> dict:
    return {
        "desired": summary.desired,
        "prepared": summary.prepared,
        "remark": summary.remark,
        "total_duration": summary.total_duration,
        "tasks": [
            {
                "question": task.question,
                "final_outcome": task.final_outcome.value,
                "average_duration": task.average_duration,
                "attempts": [
                    {
                        "attempt": record.attempt,
                        "asked_at": format_timestamp(record.asked_at),
                        "answered_at": format_timestamp(record.answered_at),
                        "outcome": record.outcome.value,
                        "duration": record.duration_seconds,
                    }
                    for record in task.attempts
                ],
            }
            for task in summary.tasks
        ],
    }


def _graph_json(graph: OntologyGraph) -> dict:
    return {
        "parents": [
            {
                "id": node.id,
                "content": node.content,
                "leaves": [
                    {"id": leaf.id, "content": leaf.content}
                    for leaf in node.leaves
                ],
            }
            for node in graph.parents
        ],
        "prerequisites": dict(graph.prereq_edges),
    }


def _parse_range(spec: str):
    if ".." in spec:
        low, _, high = spec.partition("..")
    else:
        low = high = spec
    try:
        return int(low), int(high)
    except ValueError:
        raise RequestValidationError(
            [{"loc": ("query",), "msg": f"bad range {spec!r}"}]
        ) from None


def _load_file(path: str, label: str, loader):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise LoadError(f"cannot read {label} at {path}: {exc}") from exc
    try:
        return loader(text)
    except PreassessError as exc:
        raise LoadError(f"cannot load {label} at {path}: {exc}") from exc


def serve(config: ServerConfig) -> None:
    """Run the service until interrupted; port conflicts become BindError."""
    import uvicorn

    app = create_app(config)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits 1 when the socket is taken
        raise BindError(
            f"cannot serve on {config.host}:{config.port}"
        ) from exc
    except OSError as exc:
        raise BindError(
            f"cannot bind {config.host}:{config.port}: {exc}"
        ) from exc
