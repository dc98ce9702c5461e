"""Append-only causal trace of a session.

Each operator turn forms a tree rooted at its user-turn event; delegated
sub-agent activity hangs off the delegation event, tool results off
their calls. Event ids are strictly increasing in emission order across
the whole session, which is what makes cursor polling a complete,
gap-free replay.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class EventKind(str, Enum):
    USER_TURN = "user_turn"
    THOUGHT = "thought"
    DELEGATION = "delegation"
    TOOL_CALL = "tool_call"
    TOOL_RESULT = "tool_result"
    AGENT_RESPONSE = "agent_response"


@dataclass(frozen=True)
class TraceEvent:
    event_id: int
    parent_id: int | None
    timestamp: float
    kind: EventKind
    agent: str
    payload: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "event_id": self.event_id,
            "parent_id": self.parent_id,
            "timestamp": self.timestamp,
            "kind": self.kind.value,
            "agent": self.agent,
            "payload": dict(self.payload),
        }


class Trace:
    def __init__(self) -> None:
        self._events: list[TraceEvent] = []
        self._lock = threading.Lock()
        self._next_id = 1

    def append(
        self,
        kind: EventKind,
        agent: str,
        payload: Mapping[str, Any] | None = None,
        parent_id: int | None = None,
    ) -> TraceEvent:
        """Append one event atomically and return it."""
        with self._lock:
            if parent_id is not None and not any(e.event_id == parent_id for e in self._events):
                raise ValueError(f"parent event {parent_id} not in trace")
            event = TraceEvent(
                event_id=self._next_id,
                parent_id=parent_id,
                timestamp=time.time(),
                kind=kind,
                agent=agent,
                payload=payload or {},
            )
            self._events.append(event)
            self._next_id += 1
            return event

    def events(self) -> list[TraceEvent]:
        with self._lock:
            return list(self._events)

    def events_since(self, cursor: int) -> list[TraceEvent]:
        """Events with id > cursor, in id order (the polling contract)."""
        with self._lock:
            return [e for e in self._events if e.event_id > cursor]

    def last_event_id(self) -> int:
        with self._lock:
            return self._events[-1].event_id if self._events else 0

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(e.to_dict(), sort_keys=True) for e in self.events()) + "\n"
