import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import type { SessionView } from "../src/types.js";
import { makeView, scriptedFetch } from "./helpers.js";

function controllerWith(
  responses: Parameters<typeof scriptedFetch>[0],
): {
  ctl: SessionController;
  calls: ReturnType<typeof scriptedFetch>["calls"];
  seen: (SessionView | null)[];
} {
  const { fn, calls } = scriptedFetch(responses);
  const seen: (SessionView | null)[] = [];
  const ctl = new SessionController(new ApiClient("", fn), (v) => seen.push(v));
  return { ctl, calls, seen };
}

afterEach(() => {
  vi.useRealTimers();
});

describe("session controller", () => {
  it("stores the created session and notifies the listener", async () => {
    const view = makeView({ id: "abc" });
    const { ctl, seen } = controllerWith([
      { status: 201, body: { id: "abc", view } },
    ]);
    await ctl.create({ source: "x = 1" });
    expect(ctl.sessionId).toBe("abc");
    expect(seen).toHaveLength(1);
    expect(ctl.view?.id).toBe("abc");
  });

  it("re-fetches the view instead of failing on a 409 conflict", async () => {
    const stale = makeView({ sequencer: "3" });
    const fresh = makeView({ sequencer: "4" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view: stale } },
      { status: 409, body: { error: "choice 5 is not enabled" } },
      { status: 200, body: fresh },
    ]);
    await ctl.create({ source: "x = 1" });
    await ctl.chooseAndStep(5);
    expect(ctl.view?.sequencer).toBe("4");
    expect(calls.map((c) => c.method)).toEqual(["POST", "POST", "GET"]);
    expect(calls[2].url).toBe("/sessions/abc");
  });

  it("steps back by flipping first when running forward", async () => {
    const forward = makeView({ direction: "forward", sequencer: "3" });
    const flipped = makeView({ direction: "reverse", sequencer: "3" });
    const stepped = makeView({ direction: "reverse", sequencer: "2" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view: forward } },
      { status: 200, body: flipped },
      { status: 200, body: stepped },
    ]);
    await ctl.create({ source: "x = 1" });
    await ctl.stepBack();
    expect(calls.map((c) => c.url)).toEqual([
      "/sessions",
      "/sessions/abc/flip",
      "/sessions/abc/step",
    ]);
    expect(ctl.view?.sequencer).toBe("2");
  });

  it("steps back without flipping when already reversed", async () => {
    const reversed = makeView({ direction: "reverse", sequencer: "3" });
    const stepped = makeView({ direction: "reverse", sequencer: "2" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view: reversed } },
      { status: 200, body: stepped },
    ]);
    await ctl.create({ source: "x = 1" });
    await ctl.stepBack();
    expect(calls.map((c) => c.url)).toEqual(["/sessions", "/sessions/abc/step"]);
  });

  it("refuses to step back from the initial state", async () => {
    const initial = makeView({ direction: "forward", sequencer: "0" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view: initial } },
    ]);
    await ctl.create({ source: "x = 1" });
    expect(ctl.stepBackEnabled()).toBe(false);
    await ctl.stepBack();
    expect(calls).toHaveLength(1);
  });

  it("steps forward from reverse mode by flipping first", async () => {
    const reversed = makeView({ direction: "reverse", sequencer: "2" });
    const flipped = makeView({ direction: "forward", sequencer: "2" });
    const stepped = makeView({ direction: "forward", sequencer: "3" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view: reversed } },
      { status: 200, body: flipped },
      { status: 200, body: stepped },
    ]);
    await ctl.create({ source: "x = 1" });
    await ctl.stepForward();
    expect(calls.map((c) => c.url)).toEqual([
      "/sessions",
      "/sessions/abc/flip",
      "/sessions/abc/step",
    ]);
  });

  it("polls for fresh views while idle", async () => {
    vi.useFakeTimers();
    const view = makeView({ id: "abc" });
    const { ctl, calls } = controllerWith([
      { status: 201, body: { id: "abc", view } },
      { status: 200, body: view },
      { status: 200, body: view },
    ]);
    await ctl.create({ source: "x = 1" });
    ctl.startPolling(1000);
    await vi.advanceTimersByTimeAsync(2500);
    ctl.stopPolling();
    await vi.advanceTimersByTimeAsync(2000);
    expect(calls).toHaveLength(3);
    expect(calls.slice(1).every((c) => c.method === "GET")).toBe(true);
  });
});
