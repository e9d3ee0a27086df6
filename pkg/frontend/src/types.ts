/**
 * Wire types for the session service.
 *
 * Conventions: data values (store contents, banked reversal values) travel
 * as decimal strings; booleans as "1"/"0"; structural counters (statement
 * uids, sizes, step indexes) as JSON numbers. Nothing here re-interprets a
 * value — the UI shows what the protocol says, verbatim.
 */

export interface Span {
  line: number;
  col: number;
}

export interface EnabledStep {
  index: number;
  rule: string;
  label: string;
  text: string;
  address: string[];
  uid: number;
  origin: number;
  span: Span | null;
}

export interface Binding {
  name: string;
  scope: string | number;
  kind: "var" | "arr" | "proc";
  size?: number;
  ref?: string;
  value?: string | string[] | null;
  location?: string;
}

/** A banked copy of an annotated subtree (loop bodies in flight). */
export interface CopyRecordData {
  record: [string | null, string[] | null][];
}

export type ReversalValue = string | CopyRecordData;

export interface ReversalEntry {
  ident: string;
  value: ReversalValue;
}

/** One named stack per reversal column, entries newest-first. */
export type ReversalView = Record<string, ReversalEntry[]>;

export interface StmtNode {
  kind: string;
  uid: number;
  origin: number;
  text: string;
  stack: string[] | null;
  cid?: string;
  marker?: string | null;
  then?: ProgramNode;
  else?: ProgramNode;
  body?: ProgramNode;
}

export type SeqItem = { node: "stmt"; stmt: StmtNode } | ParNode;

export interface ParNode {
  node: "par";
  left: ProgramNode;
  right: ProgramNode;
}

export type ProgramNode =
  | { node: "empty"; items: [] }
  | ParNode
  | { node: "seq"; items: SeqItem[] };

export interface StateView {
  sequencer: string;
  store: Record<string, string>;
  bindings: Binding[];
  loops: Record<string, ProgramNode>;
  procs: Record<string, { name: string; body: ProgramNode }>;
  reversal: ReversalView;
}

export type SessionStatus = "running" | "terminal" | "error";
export type Direction = "forward" | "reverse";

export interface SessionView {
  id: string;
  status: SessionStatus;
  direction: Direction;
  policy: string;
  seed: string | null;
  sequencer: string;
  next_id: string | null;
  prev_id: string | null;
  steps_taken: number;
  program: ProgramNode;
  listing: string;
  enabled: EnabledStep[];
  state: StateView;
  delta: ReversalView;
  error?: string;
}

export interface DeltaOp {
  op: string;
  stack: string;
  id: string;
  value: ReversalValue;
}

export interface TraceStep {
  rule: string;
  id: string;
  direction: string;
  redex: {
    address: string[];
    uid: number;
    origin: number;
    detail: unknown;
  };
  delta_ops: DeltaOp[];
}

export interface TraceDocument {
  version: string;
  program_source: string;
  init: Record<string, string>;
  policy: string;
  seed: string | null;
  steps: TraceStep[];
  final_state: StateView;
  delta: ReversalView;
  next_id: string;
  direction?: string;
}

export type StepChoice = number | "auto";

export type RunTarget = "terminal" | { steps: number } | { identifier: number };

export interface CreateSessionBody {
  source?: string;
  bundle?: TraceDocument;
  policy?: string;
  seed?: string | number | null;
  init?: Record<string, string>;
}

export interface CreateSessionResult {
  id: string;
  view: SessionView;
}
