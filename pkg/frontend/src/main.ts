// Console bootstrap: one session, one in-flight trace poll, sends
// disabled while a turn is pending. Poll interval starts at 500 ms and
// backs off up to 4x while the timeline is idle.

import { ApiError, ServiceClient } from "./api.js";
import {
  renderConfirmModal,
  renderDecomposition,
  renderFleetGrid,
  renderMessages,
  renderNotices,
  renderPlanTable,
  renderTimeline,
} from "./render.js";
import { appendEvents, applyMessageReply, initialViewModel, sendDisabled } from "./state.js";

const POLL_INTERVAL_MS = 500;
const POLL_BACKOFF_MAX_MS = 2000;

function mustFind(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

async function bootstrap(): Promise<void> {
  const client = new ServiceClient("");
  const vm = initialViewModel();

  const sections = {
    messages: mustFind("messages"),
    decomposition: mustFind("decomposition"),
    fleet: mustFind("fleet-grid"),
    plan: mustFind("plan"),
    timeline: mustFind("timeline"),
    modal: mustFind("confirm-modal"),
    notices: mustFind("notices"),
  };
  const form = mustFind("intent-form") as HTMLFormElement;
  const input = mustFind("intent-input") as HTMLInputElement;
  const sendButton = mustFind("send-button") as HTMLButtonElement;

  let pollDelay = POLL_INTERVAL_MS;
  let polling = false;

  function redraw(): void {
    renderMessages(sections.messages, vm);
    renderDecomposition(sections.decomposition, vm.decomposition);
    renderFleetGrid(sections.fleet, vm);
    renderPlanTable(sections.plan, vm.plan);
    renderTimeline(sections.timeline, vm);
    renderNotices(sections.notices, vm);
    renderConfirmModal(sections.modal, vm, {
      onApprove: (token) => void approve(token),
      onDismiss: () => {
        vm.pendingToken = null;
        redraw();
      },
    });
    sendButton.disabled = sendDisabled(vm) || input.value.trim() === "";
  }

  async function refreshFleetAndPlan(): Promise<void> {
    vm.fleet = await client.fleet();
    const latest = await client.latestPlan();
    if (latest) vm.plan = latest;
  }

  async function pollTrace(): Promise<void> {
    if (polling || !vm.sessionId) return;
    polling = true;
    try {
      const events = await client.trace(vm.sessionId, vm.cursor);
      if (events.length) {
        appendEvents(vm, events);
        pollDelay = POLL_INTERVAL_MS;
        redraw();
      } else {
        pollDelay = Math.min(pollDelay * 2, POLL_BACKOFF_MAX_MS);
      }
    } catch (err) {
      console.warn("trace poll failed", err);
    } finally {
      polling = false;
      setTimeout(() => void pollTrace(), pollDelay);
    }
  }

  async function send(text: string): Promise<void> {
    if (!vm.sessionId || sendDisabled(vm)) return;
    vm.sending = true;
    redraw();
    try {
      const reply = await client.sendMessage(vm.sessionId, text);
      applyMessageReply(vm, text, reply);
      appendEvents(vm, await client.trace(vm.sessionId, vm.cursor));
      await refreshFleetAndPlan();
      pollDelay = POLL_INTERVAL_MS;
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        vm.violations = err.violations.length ? err.violations : [err.message];
      } else if (err instanceof ApiError && (err.status === 502 || err.status === 0)) {
        vm.banner = "Backend offline: the service could not reach its model endpoint.";
      } else {
        vm.banner = String(err);
      }
    } finally {
      vm.sending = false;
      redraw();
    }
  }

  async function approve(token: string): Promise<void> {
    if (!vm.sessionId) return;
    try {
      const reply = await client.confirm(vm.sessionId, token);
      vm.messages.push({ role: "agent", text: reply.response });
      vm.pendingToken = null;
      appendEvents(vm, await client.trace(vm.sessionId, vm.cursor));
      await refreshFleetAndPlan();
    } catch (err) {
      vm.banner = err instanceof ApiError ? err.message : String(err);
    }
    redraw();
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) return;
    input.value = "";
    void send(text);
  });
  input.addEventListener("input", () => {
    sendButton.disabled = sendDisabled(vm) || input.value.trim() === "";
  });

  const config = await client.config();
  vm.bands = config.bands;
  vm.sessionId = await client.createSession();
  await refreshFleetAndPlan();
  redraw();
  void pollTrace();
}

void bootstrap().catch((err) => {
  console.error("console failed to start", err);
  const notices = document.getElementById("notices");
  if (notices) notices.textContent = `Console failed to start: ${String(err)}`;
});
