// DOM renderers. Each renderer owns one container and rebuilds it from
// the view model; document access goes through the container so the
// same code runs in the browser and under a simulated DOM in tests.

import type { DecompositionDoc, PlanDoc, SnapshotDoc } from "./api.js";
import { bandColor, type ViewModel } from "./state.js";
import { buildTimeline, eventLabel, type TimelineNode } from "./timeline.js";

export const PLAN_COLUMNS = [
  "# Engines",
  "RUL Range",
  "Recommended Action",
  "Priority",
  "Cost (USD)",
  "Labor Hours",
  "Assigned Staff",
  "Scheduled Time",
] as const;

function el(
  container: Element,
  tag: string,
  className?: string,
  text?: string,
): HTMLElement {
  const node = container.ownerDocument.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMessages(container: Element, vm: ViewModel): void {
  container.innerHTML = "";
  for (const message of vm.messages) {
    const item = el(container, "div", `message message-${message.role}`);
    item.appendChild(el(container, "span", "message-role", message.role));
    const body = el(container, "pre", "message-text", message.text);
    item.appendChild(body);
    container.appendChild(item);
  }
  container.scrollTop = container.scrollHeight;
}

export function renderDecomposition(container: Element, decomposition: DecompositionDoc | null): void {
  container.innerHTML = "";
  if (!decomposition) {
    container.appendChild(el(container, "p", "empty-state", "No intent decomposed yet."));
    return;
  }
  const intent = decomposition.intent;
  const card = el(container, "div", "decomposition-card");

  const addSection = (title: string, lines: string[]) => {
    const section = el(container, "div", "component");
    section.appendChild(el(container, "h4", undefined, title));
    const list = el(container, "ul");
    const items = lines.length ? lines : ["-"];
    for (const line of items) list.appendChild(el(container, "li", undefined, line));
    section.appendChild(list);
    card.appendChild(section);
  };

  addSection(
    "Expectations",
    intent.expectations.map(
      (e) => `${e.objective}: ${e.description}${e.metric ? ` [${e.metric}]` : ""}`,
    ),
  );
  addSection(
    "Conditions",
    intent.conditions.map((c) => `${c.subject} ${c.comparator} ${c.threshold} ${c.unit}`.trim()),
  );
  addSection("Targets", [describeTargets(intent.targets)]);
  addSection("Context", [
    `priority ${intent.context.priority}` +
      (intent.context.timeframe_days !== null
        ? `, within ${intent.context.timeframe_days} day(s)`
        : "") +
      (intent.context.scope ? `, ${intent.context.scope}` : ""),
  ]);
  addSection(
    "Information",
    intent.information.map((i) => `${i.key} = ${i.value}`),
  );
  container.appendChild(card);
}

function describeTargets(targets: DecompositionDoc["intent"]["targets"]): string {
  if (targets.kind === "static") return `engines ${(targets.engine_ids ?? []).join(", ")}`;
  const filter = targets.filter ?? {};
  if (filter.kind === "all") return "all engines in the fleet";
  return `engines with ${String(filter.metric)} ${String(filter.kind)} ${String(filter.value)}`;
}

export function renderFleetGrid(container: Element, vm: ViewModel): void {
  container.innerHTML = "";
  for (const snapshot of vm.fleet) {
    const color = bandColor(snapshot, vm.bands);
    const tile = el(container, "div", `engine-tile band-${color}`);
    tile.setAttribute("data-engine-id", String(snapshot.engine_id));
    tile.appendChild(el(container, "div", "engine-id", `#${snapshot.engine_id}`));
    tile.appendChild(el(container, "div", "engine-rul", `RUL ${snapshot.rul}`));
    tile.appendChild(el(container, "div", "engine-status", snapshot.status));
    container.appendChild(tile);
  }
}

export function renderPlanTable(container: Element, plan: PlanDoc | null): void {
  container.innerHTML = "";
  if (!plan || plan.groups.length === 0) {
    container.appendChild(el(container, "p", "empty-state", "No maintenance plan yet."));
    return;
  }
  const table = el(container, "table", "plan-table");
  const thead = el(container, "thead");
  const headRow = el(container, "tr");
  for (const column of PLAN_COLUMNS) headRow.appendChild(el(container, "th", undefined, column));
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = el(container, "tbody");
  for (const group of plan.groups) {
    const row = el(container, "tr", `plan-row action-${group.action}`);
    const cells = [
      String(group.engine_count),
      group.rul_range,
      group.action.toUpperCase(),
      group.priority,
      formatNumber(group.cost_usd),
      formatNumber(group.labor_hours),
      `[${group.staff.join(", ")}]`,
      group.scheduled_time,
    ];
    for (const cell of cells) row.appendChild(el(container, "td", undefined, cell));
    tbody.appendChild(row);
  }
  table.appendChild(tbody);

  const tfoot = el(container, "tfoot");
  const totals = el(container, "tr", "plan-totals");
  const label = el(container, "td", undefined, "Totals");
  label.setAttribute("colspan", "4");
  totals.appendChild(label);
  const amount = el(
    container,
    "td",
    undefined,
    `${formatNumber(plan.totals.cost_usd)} USD / ${formatNumber(plan.totals.labor_hours)} h`,
  );
  amount.setAttribute("colspan", "4");
  totals.appendChild(amount);
  tfoot.appendChild(totals);
  table.appendChild(tfoot);
  container.appendChild(table);
}

function formatNumber(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

export function renderTimeline(container: Element, vm: ViewModel): void {
  container.innerHTML = "";
  const roots = buildTimeline(vm.events);
  if (!roots.length) {
    container.appendChild(el(container, "p", "empty-state", "No activity yet."));
    return;
  }
  const list = el(container, "ul", "timeline");
  for (const root of roots) list.appendChild(renderNode(container, root));
  container.appendChild(list);
}

function renderNode(container: Element, node: TimelineNode): HTMLElement {
  const item = el(container, "li", `trace-node kind-${node.event.kind}`);
  item.setAttribute("data-event-id", String(node.event.event_id));
  item.appendChild(el(container, "span", "trace-label", eventLabel(node.event)));
  if (node.children.length) {
    const children = el(container, "ul", "trace-children");
    for (const child of node.children) children.appendChild(renderNode(container, child));
    item.appendChild(children);
  }
  return item;
}

export interface ModalHandlers {
  onApprove: (token: string) => void;
  onDismiss: () => void;
}

/** The confirmation modal is the only path that approves a critical action. */
export function renderConfirmModal(container: Element, vm: ViewModel, handlers: ModalHandlers): void {
  container.innerHTML = "";
  if (!vm.pendingToken) {
    container.classList.add("hidden");
    return;
  }
  container.classList.remove("hidden");
  const token = vm.pendingToken;
  const dialog = el(container, "div", "modal-dialog");
  dialog.appendChild(el(container, "h3", undefined, "Confirm critical action"));
  dialog.appendChild(
    el(
      container,
      "p",
      undefined,
      "The agent wants to stop an engine. This is irreversible for the session. Approve?",
    ),
  );
  const approve = el(container, "button", "approve-button", "Approve stop");
  approve.setAttribute("data-token", token);
  approve.addEventListener("click", () => handlers.onApprove(token));
  const dismiss = el(container, "button", "dismiss-button", "Dismiss");
  dismiss.addEventListener("click", () => handlers.onDismiss());
  dialog.appendChild(approve);
  dialog.appendChild(dismiss);
  container.appendChild(dialog);
}

export function renderNotices(container: Element, vm: ViewModel): void {
  container.innerHTML = "";
  if (vm.banner) container.appendChild(el(container, "div", "banner banner-error", vm.banner));
  if (vm.violations.length) {
    const list = el(container, "ul", "violations");
    for (const violation of vm.violations) {
      list.appendChild(el(container, "li", undefined, violation));
    }
    container.appendChild(list);
  }
}
