"""HTTP front door wrapping ServiceCore."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..config import ServiceConfig
from ..decompose import BackendUnavailable, DecompositionFailed
from ..fleet import UnknownEngine
from ..wiring import Orchestrator, build_orchestrator
from .core import ServiceCore, SessionBusy, StaleToken, UnknownSession
from .schemas import (
    ConfigView,
    ConfirmRequest,
    ConfirmResponse,
    FleetResponse,
    MessageRequest,
    MessageResponse,
    SessionCreated,
    SessionList,
    TraceResponse,
)


def create_app(config: ServiceConfig | None = None, orchestrator: Orchestrator | None = None) -> FastAPI:
    if orchestrator is None:
        if config is None:
            raise ValueError("create_app needs a config or a prebuilt orchestrator")
        orchestrator = build_orchestrator(config)
    core = ServiceCore(orchestrator)

    app = FastAPI(title="fleetintent", version="0.1.0")
    app.state.core = core

    @app.post("/sessions", response_model=SessionCreated)
    def create_session():
        return SessionCreated(session_id=core.create_session())

    @app.get("/sessions", response_model=SessionList)
    def list_sessions():
        return SessionList(sessions=core.session_ids())

    @app.post("/sessions/{session_id}/messages", response_model=MessageResponse)
    def post_message(session_id: str, body: MessageRequest):
        try:
            outcome = core.post_message(session_id, body.text)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        except SessionBusy:
            raise HTTPException(status_code=409, detail="session is busy with another turn")
        except BackendUnavailable as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        except DecompositionFailed as exc:
            return JSONResponse(
                status_code=422,
                content={"detail": "decomposition failed", "violations": exc.violations},
            )
        except ValueError as exc:
            # empty input and other precondition violations
            raise HTTPException(status_code=422, detail=str(exc))
        return MessageResponse(
            decomposition=outcome.decomposition,
            response=outcome.response,
            plan=outcome.plan,
            pending_confirmation=outcome.pending_confirmation,
            trace_cursor=outcome.trace_cursor,
        )

    @app.post("/sessions/{session_id}/confirm", response_model=ConfirmResponse)
    def confirm(session_id: str, body: ConfirmRequest):
        try:
            outcome = core.confirm(session_id, body.token)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        except StaleToken as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return ConfirmResponse(
            response=outcome.response, result=outcome.result, trace_cursor=outcome.trace_cursor
        )

    @app.get("/sessions/{session_id}/trace", response_model=TraceResponse)
    def trace(session_id: str, since: int = 0):
        try:
            events = core.trace_events(session_id, since)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        cursor = events[-1]["event_id"] if events else since
        return TraceResponse(events=events, cursor=cursor)

    @app.get("/fleet", response_model=FleetResponse)
    def fleet():
        return FleetResponse(snapshots=core.fleet())

    @app.get("/fleet/{engine_id}")
    def engine(engine_id: int):
        try:
            return core.engine(engine_id)
        except UnknownEngine:
            raise HTTPException(status_code=404, detail=f"unknown engine {engine_id}")

    @app.get("/plans/latest")
    def latest_plan():
        plan = core.latest_plan()
        if plan is None:
            raise HTTPException(status_code=404, detail="no plan has been produced yet")
        return plan

    @app.get("/config", response_model=ConfigView)
    def config_view():
        return ConfigView(**core.config_view())

    frontend = orchestrator.config.frontend_dir
    if frontend and Path(frontend).is_dir():
        app.mount("/ui", StaticFiles(directory=str(frontend), html=True), name="console")

    return app
