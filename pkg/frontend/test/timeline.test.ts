import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { openReplayAt, prefixBundle } from "../src/timeline.js";
import type { TraceDocument, TraceStep } from "../src/types.js";
import { emptyState, makeView, scriptedFetch } from "./helpers.js";

function step(id: string, direction = "forward"): TraceStep {
  return {
    rule: "assign-overwrite",
    id,
    direction,
    redex: { address: ["0"], uid: 1, origin: 1, detail: null },
    delta_ops: [],
  };
}

function doc(steps: TraceStep[]): TraceDocument {
  return {
    version: "1",
    program_source: "x = 1",
    init: {},
    policy: "leftmost",
    seed: null,
    steps,
    final_state: emptyState(),
    delta: {},
    next_id: String(steps.length),
    direction: "forward",
  };
}

describe("timeline replay", () => {
  it("cuts the bundle after the clicked step and drops the direction tag", () => {
    const bundle = prefixBundle(doc([step("0"), step("1"), step("2")]), 2);
    expect(bundle.steps.map((s) => s.id)).toEqual(["0", "1"]);
    expect("direction" in bundle).toBe(false);
    expect(bundle.program_source).toBe("x = 1");
  });

  it("opens a fresh session from the prefix and keeps it forward", async () => {
    const trace = doc([step("0"), step("1"), step("2")]);
    const replica = makeView({ id: "fresh", direction: "forward", sequencer: "2" });
    const { fn, calls } = scriptedFetch([
      { status: 200, body: trace },
      { status: 201, body: { id: "fresh", view: replica } },
    ]);
    const result = await openReplayAt(new ApiClient("", fn), "orig", 1);
    expect(result.id).toBe("fresh");
    expect(result.view.sequencer).toBe("2");
    const sent = calls[1].body as { bundle: TraceDocument };
    expect(sent.bundle.steps).toHaveLength(2);
    expect(calls.map((c) => c.url)).toEqual(["/sessions/orig/trace", "/sessions"]);
  });

  it("flips a replica that lands in reverse so next-identifier reads naturally", async () => {
    const trace = doc([step("0"), step("1", "reverse")]);
    const reversed = makeView({ id: "fresh", direction: "reverse", sequencer: "1" });
    const forward = makeView({ id: "fresh", direction: "forward", sequencer: "1" });
    const { fn, calls } = scriptedFetch([
      { status: 200, body: trace },
      { status: 201, body: { id: "fresh", view: reversed } },
      { status: 200, body: forward },
    ]);
    const result = await openReplayAt(new ApiClient("", fn), "orig", 1);
    expect(result.view.direction).toBe("forward");
    expect(calls[2].url).toBe("/sessions/fresh/flip");
  });
});
