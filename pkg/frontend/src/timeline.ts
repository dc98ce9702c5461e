// Trace events arrive as a flat id/parent list; the timeline shows them
// as the tree they form: each operator turn is a root, delegations nest
// under the delegating agent, tool results pair under their calls.

import type { TraceEventDoc } from "./api.js";

export interface TimelineNode {
  event: TraceEventDoc;
  children: TimelineNode[];
}

export function buildTimeline(events: TraceEventDoc[]): TimelineNode[] {
  const nodes = new Map<number, TimelineNode>();
  const roots: TimelineNode[] = [];
  const ordered = [...events].sort((a, b) => a.event_id - b.event_id);
  for (const event of ordered) {
    const node: TimelineNode = { event, children: [] };
    if (event.parent_id === null) {
      roots.push(node);
    } else {
      const parent = nodes.get(event.parent_id);
      if (!parent) {
        console.warn(`trace event ${event.event_id} references missing parent ${event.parent_id}`);
        continue;
      }
      parent.children.push(node);
    }
    nodes.set(event.event_id, node);
  }
  return roots;
}

export function eventLabel(event: TraceEventDoc): string {
  const payload = event.payload ?? {};
  switch (event.kind) {
    case "user_turn":
      return `operator: ${String(payload.text ?? "")}`;
    case "delegation":
      return `${event.agent} -> ${String(payload.to ?? "?")}: ${String(payload.task ?? "")}`;
    case "tool_call":
      return `${event.agent} calls ${String(payload.tool ?? "?")}(${formatArguments(payload)})`;
    case "tool_result": {
      const status = String(payload.status ?? "?");
      const kind = payload.error_kind ? ` (${String(payload.error_kind)})` : "";
      return `result: ${status}${kind}`;
    }
    case "agent_response":
      return `${event.agent} responds`;
    default:
      return `${event.agent}: ${event.kind}`;
  }
}

function formatArguments(payload: Record<string, unknown>): string {
  const args = payload.arguments;
  if (typeof args !== "object" || args === null) return "";
  return Object.entries(args as Record<string, unknown>)
    .map(([key, value]) => `${key}=${JSON.stringify(value)}`)
    .join(", ");
}
