"""Session management and turn execution behind both HTTP and the REPL.

Requests against different sessions proceed concurrently; turns within
one session serialize on that session's lock (queueing by default, or
refusing with SessionBusy when configured). Confirmation tokens are
session-scoped and single-use.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any

from ..decompose import decompose
from ..fleet import fleet_snapshots, get_engine_data
from ..runtime import ConfirmationGate, EventKind, Session, invoke_tool, run_turn
from ..wiring import Orchestrator


class UnknownSession(KeyError):
    pass


class SessionBusy(RuntimeError):
    pass


class StaleToken(ValueError):
    pass


@dataclass
class SessionState:
    session: Session
    gate: ConfirmationGate
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass(frozen=True)
class MessageOutcome:
    decomposition: dict[str, Any]
    response: str
    plan: dict[str, Any] | None
    pending_confirmation: str | None
    trace_cursor: int


@dataclass(frozen=True)
class ConfirmOutcome:
    response: str
    result: dict[str, Any]
    trace_cursor: int


class ServiceCore:
    def __init__(self, orchestrator: Orchestrator):
        self.orchestrator = orchestrator
        self._sessions: dict[str, SessionState] = {}
        self._sessions_lock = threading.Lock()

    # -- sessions ---------------------------------------------------------------

    def create_session(self) -> str:
        session = Session.new()
        state = SessionState(
            session=session,
            gate=ConfirmationGate(auto_confirm=self.orchestrator.config.auto_confirm_critical),
        )
        with self._sessions_lock:
            self._sessions[session.session_id] = state
        return session.session_id

    def session_ids(self) -> list[str]:
        with self._sessions_lock:
            return list(self._sessions)

    def _state(self, session_id: str) -> SessionState:
        with self._sessions_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(session_id) from None

    # -- turns ------------------------------------------------------------------

    def post_message(self, session_id: str, text: str) -> MessageOutcome:
        state = self._state(session_id)
        orch = self.orchestrator
        if not state.lock.acquire(blocking=orch.config.busy_policy == "queue"):
            raise SessionBusy(session_id)
        try:
            report = decompose(
                text,
                orch.decomposer,
                orch.fleet_summary(),
                max_attempts=orch.config.max_decompose_attempts,
            )
            result = run_turn(
                state.session,
                report.intent,
                orch.root_agent,
                orch.make_planner(),
                orch.registry,
                orch.agents,
                state.gate,
                depth_limit=orch.config.delegation_depth_limit,
            )
            plan = result.payload.get("plan") if isinstance(result.payload, dict) else None
            return MessageOutcome(
                decomposition=report.to_dict(),
                response=result.text,
                plan=plan,
                pending_confirmation=result.pending_confirmation,
                trace_cursor=state.session.trace.last_event_id(),
            )
        finally:
            state.lock.release()

    def confirm(self, session_id: str, token: str) -> ConfirmOutcome:
        state = self._state(session_id)
        with state.lock:
            pending = state.session.pending_confirmation
            if pending is None or pending.token != token:
                raise StaleToken("token is unknown, already used, or for another session")
            try:
                call = state.gate.confirm(token)
            except KeyError:
                raise StaleToken("token is unknown, already used, or for another session") from None

            trace = state.session.trace
            call_event = trace.append(
                EventKind.TOOL_CALL,
                agent="operator_confirmation",
                payload={"tool": call.tool, "arguments": dict(call.arguments), "token": token},
                parent_id=pending.user_turn_event_id,
            )
            result = invoke_tool(self.orchestrator.registry, call, state.gate)
            trace.append(
                EventKind.TOOL_RESULT,
                agent="operator_confirmation",
                payload=result.to_dict(),
                parent_id=call_event.event_id,
            )
            if result.ok:
                engine_id = result.payload.get("engine_id")
                text = f"Confirmed: {call.tool} executed for engine {engine_id}."
            else:
                text = f"Confirmed action failed: {result.error_kind}."
            trace.append(
                EventKind.AGENT_RESPONSE,
                agent="operator_confirmation",
                payload={"text": text, "payload": result.to_dict()},
                parent_id=pending.user_turn_event_id,
            )
            state.session.pending_confirmation = None
            state.session.history.append({"role": "agent", "text": text})
            return ConfirmOutcome(
                response=text,
                result=result.to_dict(),
                trace_cursor=trace.last_event_id(),
            )

    # -- reads ------------------------------------------------------------------

    def fleet(self) -> list[dict[str, Any]]:
        return [s.to_dict() for s in fleet_snapshots(self.orchestrator.store)]

    def engine(self, engine_id: int) -> dict[str, Any]:
        return get_engine_data(self.orchestrator.store, engine_id).to_dict()

    def latest_plan(self) -> dict[str, Any] | None:
        plan = self.orchestrator.latest_plan
        return plan.to_dict() if plan else None

    def trace_events(self, session_id: str, since: int = 0) -> list[dict[str, Any]]:
        state = self._state(session_id)
        return [e.to_dict() for e in state.session.trace.events_since(since)]

    def config_view(self) -> dict[str, Any]:
        config = self.orchestrator.config
        return {
            "engine_limit": config.engine_limit,
            "backend": config.backend,
            "auto_confirm_critical": config.auto_confirm_critical,
            "bands": {
                "stop_below": config.bands.stop_below,
                "repair_below": config.bands.repair_below,
                "monitor_soon_below": config.bands.monitor_soon_below,
            },
        }
