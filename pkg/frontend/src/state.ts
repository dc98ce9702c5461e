// View model and pure state transitions. No policy lives here: band
// thresholds come from the service config, and the only computation the
// console performs is mapping a snapshot onto those fetched thresholds.

import type {
  BandsDoc,
  DecompositionDoc,
  MessageReply,
  PlanDoc,
  SnapshotDoc,
  TraceEventDoc,
} from "./api.js";

export type BandColor = "green" | "yellow" | "orange" | "red" | "gray";

export interface ChatMessage {
  role: "operator" | "agent";
  text: string;
}

export interface ViewModel {
  sessionId: string | null;
  messages: ChatMessage[];
  decomposition: DecompositionDoc | null;
  events: TraceEventDoc[];
  cursor: number;
  fleet: SnapshotDoc[];
  bands: BandsDoc;
  plan: PlanDoc | null;
  pendingToken: string | null;
  sending: boolean;
  banner: string | null;
  violations: string[];
}

export function initialViewModel(): ViewModel {
  return {
    sessionId: null,
    messages: [],
    decomposition: null,
    events: [],
    cursor: 0,
    fleet: [],
    bands: { stop_below: 25, repair_below: 60, monitor_soon_below: 80 },
    plan: null,
    pendingToken: null,
    sending: false,
    banner: null,
    violations: [],
  };
}

export function bandColor(snapshot: SnapshotDoc, bands: BandsDoc): BandColor {
  if (snapshot.status === "stopped") return "gray";
  if (snapshot.rul >= bands.monitor_soon_below) return "green";
  if (snapshot.rul >= bands.repair_below) return "yellow";
  if (snapshot.rul >= bands.stop_below) return "orange";
  return "red";
}

function isWellFormedEvent(event: unknown): event is TraceEventDoc {
  if (typeof event !== "object" || event === null) return false;
  const doc = event as Record<string, unknown>;
  return (
    typeof doc.event_id === "number" &&
    (doc.parent_id === null || typeof doc.parent_id === "number") &&
    typeof doc.kind === "string" &&
    typeof doc.agent === "string"
  );
}

/** Append newly polled events: dedup by id, skip malformed ones with a warning. */
export function appendEvents(vm: ViewModel, incoming: unknown[]): void {
  const known = new Set(vm.events.map((e) => e.event_id));
  for (const event of incoming) {
    if (!isWellFormedEvent(event)) {
      console.warn("skipping malformed trace event", event);
      continue;
    }
    if (known.has(event.event_id)) continue;
    known.add(event.event_id);
    vm.events.push(event);
    if (event.event_id > vm.cursor) vm.cursor = event.event_id;
  }
  vm.events.sort((a, b) => a.event_id - b.event_id);
}

export function applyMessageReply(vm: ViewModel, text: string, reply: MessageReply): void {
  vm.messages.push({ role: "operator", text });
  vm.messages.push({ role: "agent", text: reply.response });
  vm.decomposition = reply.decomposition;
  if (reply.plan) vm.plan = reply.plan;
  vm.pendingToken = reply.pending_confirmation;
  vm.violations = [];
  vm.banner = null;
}

/** True while a turn is in flight and the send box must stay disabled. */
export function sendDisabled(vm: ViewModel): boolean {
  return vm.sending || vm.sessionId === null;
}
