/**
 * What-if inspection: replaying a prefix of a session's trace.
 *
 * Clicking timeline entry i opens a fresh session built from the original
 * session's trace document with the step list cut after entry i. The
 * service replays that prefix server-side, so the replica lands exactly on
 * the configuration right after the clicked step — no execution logic runs
 * in the browser. The replica is flipped to forward for display, making
 * "next identifier" read naturally.
 */

import { ApiClient } from "./api.js";
import type { SessionView, TraceDocument } from "./types.js";

export interface ReplicaSession {
  id: string;
  view: SessionView;
}

/** The bundle that replays the first `count` steps of `doc`. */
export function prefixBundle(doc: TraceDocument, count: number): TraceDocument {
  const bundle: TraceDocument = { ...doc, steps: doc.steps.slice(0, count) };
  // The replica's direction is whatever the prefix ends in; the original
  // document's direction field describes the full trace, not the prefix.
  delete bundle.direction;
  return bundle;
}

export async function openReplayAt(
  api: ApiClient,
  sessionId: string,
  stepIndex: number,
): Promise<ReplicaSession> {
  const doc = await api.trace(sessionId);
  const created = await api.createSession({
    bundle: prefixBundle(doc, stepIndex + 1),
  });
  let view = created.view;
  if (view.direction === "reverse") {
    view = await api.flip(created.id);
  }
  return { id: created.id, view };
}
