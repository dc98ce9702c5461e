import { describe, expect, it, vi } from "vitest";

import type { BandsDoc, SnapshotDoc, TraceEventDoc } from "../src/api.js";
import { appendEvents, bandColor, initialViewModel, sendDisabled } from "../src/state.js";

const BANDS: BandsDoc = { stop_below: 25, repair_below: 60, monitor_soon_below: 80 };

function snapshot(rul: number, status = "running"): SnapshotDoc {
  return {
    engine_id: 1,
    observed_cycle: 10,
    last_cycle: 10 + rul,
    rul,
    status,
    op_settings: {},
    sensors: {},
  };
}

function event(id: number, parent: number | null, kind = "thought"): TraceEventDoc {
  return { event_id: id, parent_id: parent, timestamp: 0, kind, agent: "root_agent", payload: {} };
}

describe("bandColor", () => {
  it("uses the fetched thresholds, not hardcoded policy", () => {
    expect(bandColor(snapshot(124), BANDS)).toBe("green");
    expect(bandColor(snapshot(80), BANDS)).toBe("green");
    expect(bandColor(snapshot(79), BANDS)).toBe("yellow");
    expect(bandColor(snapshot(60), BANDS)).toBe("yellow");
    expect(bandColor(snapshot(59), BANDS)).toBe("orange");
    expect(bandColor(snapshot(25), BANDS)).toBe("orange");
    expect(bandColor(snapshot(24), BANDS)).toBe("red");
    expect(bandColor(snapshot(0), BANDS)).toBe("red");
  });

  it("stopped engines are gray regardless of rul", () => {
    expect(bandColor(snapshot(124, "stopped"), BANDS)).toBe("gray");
  });

  it("respects non-default thresholds from the service config", () => {
    const custom: BandsDoc = { stop_below: 10, repair_below: 20, monitor_soon_below: 30 };
    expect(bandColor(snapshot(25), custom)).toBe("yellow");
  });
});

describe("appendEvents", () => {
  it("appends in id order and advances the cursor", () => {
    const vm = initialViewModel();
    appendEvents(vm, [event(2, 1), event(1, null, "user_turn")]);
    expect(vm.events.map((e) => e.event_id)).toEqual([1, 2]);
    expect(vm.cursor).toBe(2);
  });

  it("deduplicates already-seen events", () => {
    const vm = initialViewModel();
    appendEvents(vm, [event(1, null, "user_turn")]);
    appendEvents(vm, [event(1, null, "user_turn"), event(2, 1)]);
    expect(vm.events).toHaveLength(2);
  });

  it("skips malformed events with a console warning", () => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const vm = initialViewModel();
    appendEvents(vm, [{ junk: true }, event(1, null, "user_turn"), "nonsense"]);
    expect(vm.events).toHaveLength(1);
    expect(warn).toHaveBeenCalledTimes(2);
    warn.mockRestore();
  });
});

describe("sendDisabled", () => {
  it("blocks sending before a session exists and while a turn is pending", () => {
    const vm = initialViewModel();
    expect(sendDisabled(vm)).toBe(true);
    vm.sessionId = "session-x";
    expect(sendDisabled(vm)).toBe(false);
    vm.sending = true;
    expect(sendDisabled(vm)).toBe(true);
  });
});
