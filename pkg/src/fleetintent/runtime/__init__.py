from .agents import (
    AgentReply,
    AgentSpec,
    CallTool,
    Delegate,
    InvalidAgentGraph,
    Observation,
    PendingConfirmation,
    PlannerContext,
    PlannerDecision,
    Respond,
    Session,
    TurnResult,
    run_turn,
    validate_agent_graph,
)
from .planners import (
    DATA_AGENT,
    MAINTENANCE_AGENT,
    ROOT_AGENT,
    LlmPlanner,
    RulePlanner,
    ScriptedPlanner,
)
from .tools import (
    ConfirmationGate,
    DuplicateToolName,
    ParamSpec,
    ReturnSpec,
    ToolCall,
    ToolEffect,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    invoke_tool,
    register_tool,
    tool_catalog,
    validate_arguments,
)
from .trace import EventKind, Trace, TraceEvent

__all__ = [
    "AgentReply",
    "AgentSpec",
    "CallTool",
    "ConfirmationGate",
    "DATA_AGENT",
    "Delegate",
    "DuplicateToolName",
    "EventKind",
    "InvalidAgentGraph",
    "LlmPlanner",
    "MAINTENANCE_AGENT",
    "Observation",
    "ParamSpec",
    "PendingConfirmation",
    "PlannerContext",
    "PlannerDecision",
    "ROOT_AGENT",
    "Respond",
    "ReturnSpec",
    "RulePlanner",
    "ScriptedPlanner",
    "Session",
    "ToolCall",
    "ToolEffect",
    "ToolRegistry",
    "ToolResult",
    "ToolSpec",
    "Trace",
    "TraceEvent",
    "TurnResult",
    "invoke_tool",
    "register_tool",
    "run_turn",
    "tool_catalog",
    "validate_arguments",
]
