"""Tool registry, argument schema validation, and the critical-effect gate.

Tools are schema-described callables. Invocation validates the tool name
and the argument schema before the handler ever runs, so a bad call can
never mutate anything. Tools marked critical additionally need a
confirmation token from the gate; without one the call is refused and a
fresh single-use token is issued for the operator to approve.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Mapping, Sequence


class ToolEffect(str, Enum):
    READ_ONLY = "read_only"
    MUTATING = "mutating"
    CRITICAL = "critical"  # mutating by definition, gated by confirmation

    @property
    def is_mutating(self) -> bool:
        return self is not ToolEffect.READ_ONLY


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type_tag: str  # "string" | "int" | "float" | "bool" | "enum"
    required: bool = True
    enum_values: tuple[str, ...] = ()

    def check(self, value: Any) -> str | None:
        """Return a violation description, or None when the value fits."""
        if self.type_tag == "string":
            return None if isinstance(value, str) else f"{self.name}: expected string"
        if self.type_tag == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                return f"{self.name}: expected int"
            return None
        if self.type_tag == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return f"{self.name}: expected float"
            return None
        if self.type_tag == "bool":
            return None if isinstance(value, bool) else f"{self.name}: expected bool"
        if self.type_tag == "enum":
            if value not in self.enum_values:
                allowed = ", ".join(self.enum_values)
                return f"{self.name}: expected one of [{allowed}], got {value!r}"
            return None
        return f"{self.name}: unknown type tag '{self.type_tag}'"


@dataclass(frozen=True)
class ReturnSpec:
    type_tag: str
    description: str


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    params: tuple[ParamSpec, ...]
    returns: ReturnSpec
    effect: ToolEffect = ToolEffect.READ_ONLY

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "params": [
                {
                    "name": p.name,
                    "type": p.type_tag,
                    "required": p.required,
                    **({"values": list(p.enum_values)} if p.enum_values else {}),
                }
                for p in self.params
            ],
            "returns": {"type": self.returns.type_tag, "description": self.returns.description},
            "effect": self.effect.value,
        }


@dataclass(frozen=True)
class ToolCall:
    tool: str
    arguments: Mapping[str, Any] = field(default_factory=dict)

    def signature(self) -> tuple:
        return (self.tool, tuple(sorted((k, repr(v)) for k, v in self.arguments.items())))


@dataclass(frozen=True)
class ToolResult:
    ok: bool
    payload: Mapping[str, Any] = field(default_factory=dict)
    error_kind: str | None = None

    @classmethod
    def success(cls, payload: Mapping[str, Any]) -> "ToolResult":
        return cls(ok=True, payload=payload)

    @classmethod
    def error(cls, kind: str, detail: str = "", **extra: Any) -> "ToolResult":
        payload = {"detail": detail, **extra} if detail or extra else {}
        return cls(ok=False, payload=payload, error_kind=kind)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": "ok" if self.ok else "err",
            "payload": dict(self.payload),
            **({"error_kind": self.error_kind} if self.error_kind else {}),
        }


ToolHandler = Callable[[Mapping[str, Any]], ToolResult]


class DuplicateToolName(ValueError):
    pass


class ToolRegistry:
    def __init__(self) -> None:
        self._tools: dict[str, tuple[ToolSpec, ToolHandler]] = {}

    def register(self, spec: ToolSpec, handler: ToolHandler) -> "ToolRegistry":
        if spec.name in self._tools:
            raise DuplicateToolName(f"tool '{spec.name}' is already registered")
        self._tools[spec.name] = (spec, handler)
        return self

    def resolve(self, name: str) -> ToolSpec | None:
        entry = self._tools.get(name)
        return entry[0] if entry else None

    def handler(self, name: str) -> ToolHandler | None:
        entry = self._tools.get(name)
        return entry[1] if entry else None

    def names(self) -> list[str]:
        return list(self._tools)

    def specs(self) -> list[ToolSpec]:
        return [spec for spec, _ in self._tools.values()]


def register_tool(registry: ToolRegistry, spec: ToolSpec, handler: ToolHandler) -> ToolRegistry:
    return registry.register(spec, handler)


def validate_arguments(spec: ToolSpec, arguments: Mapping[str, Any]) -> list[str]:
    violations = []
    known = {p.name for p in spec.params}
    for param in spec.params:
        if param.name not in arguments:
            if param.required:
                violations.append(f"{param.name}: required argument missing")
            continue
        problem = param.check(arguments[param.name])
        if problem:
            violations.append(problem)
    for name in arguments:
        if name not in known:
            violations.append(f"{name}: unexpected argument")
    return violations


class ConfirmationGate:
    """Single-use confirmation tokens for critical tool calls.

    One gate per session. A refused call parks under a fresh token; once
    the token is confirmed, the next invocation of the identical call is
    cleared exactly once.
    """

    def __init__(self, auto_confirm: bool = False):
        self.auto_confirm = auto_confirm
        self._pending: dict[str, ToolCall] = {}
        self._confirmed: dict[str, ToolCall] = {}
        self._lock = threading.Lock()

    def clearance(self, call: ToolCall) -> str | None:
        """Return None when the call may run, else the token to confirm."""
        if self.auto_confirm:
            return None
        with self._lock:
            for token, confirmed_call in self._confirmed.items():
                if confirmed_call.signature() == call.signature():
                    del self._confirmed[token]
                    return None
            token = secrets.token_hex(8)
            self._pending[token] = call
            return token

    def confirm(self, token: str) -> ToolCall:
        """Mark a pending token as confirmed; raises KeyError if unknown/used."""
        with self._lock:
            call = self._pending.pop(token)
            self._confirmed[token] = call
            return call

    def pending_call(self, token: str) -> ToolCall | None:
        with self._lock:
            return self._pending.get(token)


def invoke_tool(
    registry: ToolRegistry, call: ToolCall, effect_gate: ConfirmationGate
) -> ToolResult:
    """Validate and execute a tool call; refusals come back as Err results."""
    spec = registry.resolve(call.tool)
    if spec is None:
        return ToolResult.error("unknown_tool", f"no tool named '{call.tool}'")
    violations = validate_arguments(spec, call.arguments)
    if violations:
        return ToolResult.error("schema_violation", "; ".join(violations))
    if spec.effect is ToolEffect.CRITICAL:
        token = effect_gate.clearance(call)
        if token is not None:
            return ToolResult.error(
                "confirmation_required",
                f"tool '{call.tool}' is critical and needs confirmation",
                token=token,
            )
    handler = registry.handler(call.tool)
    assert handler is not None
    try:
        return handler(call.arguments)
    except Exception as exc:  # handler bugs surface as observations, not crashes
        return ToolResult.error("handler_error", f"{type(exc).__name__}: {exc}")


def tool_catalog(registry: ToolRegistry, names: Sequence[str] | None = None) -> list[dict[str, Any]]:
    """Spec documents for prompt building and the console."""
    specs = registry.specs()
    if names is not None:
        wanted = set(names)
        specs = [s for s in specs if s.name in wanted]
    return [s.to_dict() for s in specs]
