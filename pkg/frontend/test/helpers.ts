/** Shared test scaffolding: scripted fetch fakes and view factories. */

import type { FetchLike } from "../src/api.js";
import type {
  ProgramNode,
  SessionView,
  StateView,
  StmtNode,
} from "../src/types.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export interface ScriptedResponse {
  status: number;
  body?: unknown;
}

/** A fetch fake that replays scripted responses and records every call. */
export function scriptedFetch(responses: ScriptedResponse[]): {
  fn: FetchLike;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fn: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body === undefined ? undefined : JSON.parse(init.body),
    });
    const next = responses.shift();
    if (!next) {
      throw new Error(`unexpected request: ${url}`);
    }
    return {
      status: next.status,
      json: async () => next.body ?? {},
      text: async () => JSON.stringify(next.body ?? {}),
    };
  };
  return { fn, calls };
}

export function stmt(partial: Partial<StmtNode> & { uid: number }): StmtNode {
  return {
    kind: "Assign",
    origin: partial.uid,
    text: "x = 1",
    stack: null,
    ...partial,
  };
}

export function seqOf(...stmts: StmtNode[]): ProgramNode {
  return { node: "seq", items: stmts.map((s) => ({ node: "stmt" as const, stmt: s })) };
}

export function emptyState(partial: Partial<StateView> = {}): StateView {
  return {
    sequencer: "0",
    store: {},
    bindings: [],
    loops: {},
    procs: {},
    reversal: {},
    ...partial,
  };
}

export function makeView(partial: Partial<SessionView> = {}): SessionView {
  return {
    id: "s1",
    status: "running",
    direction: "forward",
    policy: "leftmost",
    seed: null,
    sequencer: "0",
    next_id: "0",
    prev_id: null,
    steps_taken: 0,
    program: seqOf(stmt({ uid: 0 })),
    listing: "x = 1",
    enabled: [],
    state: emptyState(),
    delta: {},
    ...partial,
  };
}

/** Reverses the renderer's four-entity HTML escaping. */
export function unescapeHtml(text: string): string {
  return text
    .replace(/&quot;/g, '"')
    .replace(/&gt;/g, ">")
    .replace(/&lt;/g, "<")
    .replace(/&amp;/g, "&");
}

/**
 * Pulls the δ panel back out of its rendered HTML as ordered
 * (ident, raw value) pairs per column, for verbatim-mirror checks.
 */
export function extractDeltaRows(
  html: string,
): Record<string, Array<[string, string]>> {
  const out: Record<string, Array<[string, string]>> = {};
  const columns = html.matchAll(
    /<table class="delta-column" data-stack="([^"]*)">.*?<tbody>(.*?)<\/tbody>/gs,
  );
  for (const column of columns) {
    const rows: Array<[string, string]> = [];
    for (const row of column[2].matchAll(
      /<tr data-ident="([^"]*)" data-value="([^"]*)">/g,
    )) {
      rows.push([unescapeHtml(row[1]), unescapeHtml(row[2])]);
    }
    out[unescapeHtml(column[1])] = rows;
  }
  return out;
}
