"""Request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel


class SessionCreated(BaseModel):
    session_id: str


class SessionList(BaseModel):
    sessions: list[str]


class MessageRequest(BaseModel):
    text: str


class MessageResponse(BaseModel):
    decomposition: dict[str, Any]
    response: str
    plan: Optional[dict[str, Any]] = None
    pending_confirmation: Optional[str] = None
    trace_cursor: int


class ConfirmRequest(BaseModel):
    token: str


class ConfirmResponse(BaseModel):
    response: str
    result: dict[str, Any]
    trace_cursor: int


class TraceResponse(BaseModel):
    events: list[dict[str, Any]]
    cursor: int


class FleetResponse(BaseModel):
    snapshots: list[dict[str, Any]]


class ConfigView(BaseModel):
    engine_limit: int
    backend: str
    auto_confirm_critical: bool
    bands: dict[str, int]


class ErrorBody(BaseModel):
    detail: str
    violations: Optional[list[str]] = None
