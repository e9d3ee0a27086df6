/**
 * Pure view-to-HTML rendering.
 *
 * Every function here maps protocol data (plus local selection state) to an
 * HTML string and nothing else: no requests, no DOM access, no
 * interpretation of program semantics. Data values pass through verbatim —
 * decimal strings are never parsed into floats, so arbitrarily large
 * numbers display untruncated.
 */

import type {
  EnabledStep,
  ProgramNode,
  ReversalEntry,
  ReversalValue,
  ReversalView,
  SessionView,
  StateView,
  StmtNode,
  TraceStep,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** "⟨35,10⟩"-style badge for a statement's identifier stack (head first). */
export function stackBadge(stack: string[] | null): string {
  if (stack === null || stack.length === 0) {
    return "";
  }
  return `<span class="badge">⟨${escapeHtml(stack.join(","))}⟩</span>`;
}

function markerChip(marker: string | null | undefined): string {
  if (marker === "1") {
    return `<span class="marker marker-true">T</span>`;
  }
  if (marker === "0") {
    return `<span class="marker marker-false">F</span>`;
  }
  return "";
}

/** True when a branch renders as nothing but an un-run bare skip. */
function isBareSkip(node: ProgramNode | undefined): boolean {
  if (!node || node.node === "empty") {
    return true;
  }
  if (node.node !== "seq" || node.items.length !== 1) {
    return false;
  }
  const only = node.items[0];
  return (
    only.node === "stmt" &&
    only.stmt.kind === "Skip" &&
    (only.stmt.stack === null || only.stmt.stack.length === 0)
  );
}

export interface ProgramRenderOptions {
  /** uid of an enabled statement -> index to post as the step choice. */
  enabledByUid?: Map<number, number>;
}

function stmtLine(
  stmt: StmtNode,
  opts: ProgramRenderOptions,
  headerText?: string,
): string {
  const choice = opts.enabledByUid?.get(stmt.uid);
  const classes = ["stmt"];
  if (choice !== undefined) {
    classes.push("enabled");
  }
  const choiceAttr = choice === undefined ? "" : ` data-choice="${choice}"`;
  const pieces = [
    `<span class="code">${escapeHtml(headerText ?? stmt.text)}</span>`,
    markerChip(stmt.marker),
    stackBadge(stmt.stack),
  ].filter((p) => p !== "");
  return (
    `<div class="${classes.join(" ")}" data-uid="${stmt.uid}"${choiceAttr}>` +
    pieces.join(" ") +
    `</div>`
  );
}

function closerLine(text: string): string {
  return `<div class="stmt closer"><span class="code">${escapeHtml(text)}</span></div>`;
}

function renderStmt(stmt: StmtNode, opts: ProgramRenderOptions): string {
  switch (stmt.kind) {
    case "If": {
      const parts = [
        stmtLine(stmt, opts),
        `<div class="body">${renderProgram(stmt.then ?? { node: "empty", items: [] }, opts)}</div>`,
      ];
      if (!isBareSkip(stmt.else)) {
        parts.push(closerLine("else"));
        parts.push(
          `<div class="body">${renderProgram(stmt.else ?? { node: "empty", items: [] }, opts)}</div>`,
        );
      }
      parts.push(closerLine("end"));
      return parts.join("");
    }
    case "While":
    case "Block":
    case "ProcDecl":
    case "ProcRemove":
    case "Runc": {
      return (
        stmtLine(stmt, opts) +
        `<div class="body">${renderProgram(stmt.body ?? { node: "empty", items: [] }, opts)}</div>` +
        closerLine("end")
      );
    }
    default:
      return stmtLine(stmt, opts);
  }
}

/** The annotated program tree with enabled statements highlighted. */
export function renderProgram(
  node: ProgramNode,
  opts: ProgramRenderOptions = {},
): string {
  if (node.node === "empty") {
    return `<div class="stmt closer"><span class="code">skip</span></div>`;
  }
  if (node.node === "par") {
    return (
      `<div class="par">` +
      `<div class="arm">${renderProgram(node.left, opts)}</div>` +
      `<div class="arm">${renderProgram(node.right, opts)}</div>` +
      `</div>`
    );
  }
  return node.items
    .map((item) =>
      item.node === "par" ? renderProgram(item, opts) : renderStmt(item.stmt, opts),
    )
    .join("");
}

export function enabledByUid(view: SessionView): Map<number, number> {
  const map = new Map<number, number>();
  for (const step of view.enabled) {
    map.set(step.uid, step.index);
  }
  return map;
}

function bindingValue(binding: StateView["bindings"][number]): string {
  if (binding.kind === "proc") {
    return escapeHtml(binding.ref ?? "");
  }
  const value = binding.value;
  if (Array.isArray(value)) {
    return `[${value.map(escapeHtml).join(", ")}]`;
  }
  return escapeHtml(value ?? "");
}

/** The σ panel: variable bindings plus raw store cells, all verbatim. */
export function renderSigma(state: StateView): string {
  const rows = state.bindings
    .map(
      (b) =>
        `<tr data-name="${escapeHtml(b.name)}">` +
        `<td>${escapeHtml(b.name)}</td>` +
        `<td>${escapeHtml(b.kind)}</td>` +
        `<td>${escapeHtml(String(b.scope))}</td>` +
        `<td class="value">${bindingValue(b)}</td>` +
        `<td>${escapeHtml(b.location ?? "")}</td>` +
        `</tr>`,
    )
    .join("");
  const cells = Object.entries(state.store)
    .map(
      ([loc, value]) =>
        `<tr><td>${escapeHtml(loc)}</td>` +
        `<td class="value">${escapeHtml(value)}</td></tr>`,
    )
    .join("");
  const copies =
    Object.keys(state.loops).length + Object.keys(state.procs).length === 0
      ? ""
      : `<p class="copies">stored copies: ${escapeHtml(
          [...Object.keys(state.loops), ...Object.keys(state.procs)]
            .sort()
            .join(", "),
        )}</p>`;
  return (
    `<table class="bindings">` +
    `<thead><tr><th>name</th><th>kind</th><th>scope</th><th>value</th><th>loc</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<table class="cells">` +
    `<thead><tr><th>cell</th><th>value</th></tr></thead>` +
    `<tbody>${cells}</tbody></table>` +
    copies
  );
}

/** Reversal columns display data stacks first, control stacks last. */
export function reversalKeyOrder(keys: string[]): string[] {
  const control = ["B", "W", "WI"];
  const data = keys.filter((k) => !control.includes(k)).sort();
  return [...data, ...control.filter((k) => keys.includes(k))];
}

export function reversalValueText(value: ReversalValue): string {
  if (typeof value === "string") {
    return value;
  }
  return (
    "[" +
    value.record
      .map(([cid, stack]) => {
        const name = cid ?? "·";
        const ids = stack === null ? "·" : `⟨${stack.join(",")}⟩`;
        return `${name} ${ids}`;
      })
      .join("; ") +
    "]"
  );
}

function reversalRow(entry: ReversalEntry): string {
  const raw =
    typeof entry.value === "string" ? entry.value : JSON.stringify(entry.value);
  return (
    `<tr data-ident="${escapeHtml(entry.ident)}" data-value="${escapeHtml(raw)}">` +
    `<td class="ident">${escapeHtml(entry.ident)}</td>` +
    `<td class="value">${escapeHtml(reversalValueText(entry.value))}</td>` +
    `</tr>`
  );
}

/** The δ panel: one column per named stack, entries newest first. */
export function renderDelta(delta: ReversalView): string {
  const keys = reversalKeyOrder(Object.keys(delta));
  if (keys.length === 0) {
    return `<p class="empty">no reversal records</p>`;
  }
  return keys
    .map(
      (key) =>
        `<table class="delta-column" data-stack="${escapeHtml(key)}">` +
        `<thead><tr><th colspan="2">${escapeHtml(key)}</th></tr></thead>` +
        `<tbody>${delta[key].map(reversalRow).join("")}</tbody>` +
        `</table>`,
    )
    .join("");
}

/** Clickable list of the currently enabled steps. */
export function renderEnabled(view: SessionView): string {
  if (view.enabled.length === 0) {
    return `<p class="empty">nothing is enabled</p>`;
  }
  return view.enabled
    .map(
      (step: EnabledStep) =>
        `<button class="chip" data-choice="${step.index}">` +
        `<span class="rule">${escapeHtml(step.rule)}</span> ` +
        `<span class="code">${escapeHtml(step.text)}</span> ` +
        `<span class="addr">@${escapeHtml(step.address.join("/"))}</span>` +
        `</button>`,
    )
    .join("");
}

/** Step / back / flip / run buttons plus the status line. */
export function renderControls(view: SessionView): string {
  const canStep = view.status === "running";
  const canBack = view.status !== "error" && view.sequencer !== "0";
  const disabled = (ok: boolean) => (ok ? "" : " disabled");
  const nextId = view.next_id === null ? "—" : view.next_id;
  const prevId = view.prev_id === null ? "—" : view.prev_id;
  return (
    `<div class="status" data-status="${view.status}">` +
    `<span class="pill">${escapeHtml(view.status)}</span>` +
    `<span class="pill">${escapeHtml(view.direction)}</span>` +
    `<span>sequencer ${escapeHtml(view.sequencer)}</span>` +
    `<span>next ${escapeHtml(nextId)} / prev ${escapeHtml(prevId)}</span>` +
    `<span>${view.steps_taken} steps taken</span>` +
    `</div>` +
    `<div class="buttons">` +
    `<button id="btn-back"${disabled(canBack)}>◂ back</button>` +
    `<button id="btn-step"${disabled(canStep)}>step ▸</button>` +
    `<button id="btn-flip"${disabled(view.status !== "error")}>flip</button>` +
    `<button id="btn-run"${disabled(canStep)}>run to end</button>` +
    `</div>` +
    (view.error
      ? `<p class="error">frozen: ${escapeHtml(view.error)}</p>`
      : "")
  );
}

function timelineLabel(step: TraceStep): string {
  const arrow = step.direction === "forward" ? "▸" : "◂";
  return (
    `<span class="ident">#${escapeHtml(step.id)}</span> ${arrow} ` +
    `<span class="rule">${escapeHtml(step.rule)}</span> ` +
    `<span class="addr">@${escapeHtml(step.redex.address.join("/"))}</span>`
  );
}

/** The scrollable trace timeline; entries replay on click. */
export function renderTimeline(steps: TraceStep[]): string {
  if (steps.length === 0) {
    return `<p class="empty">no steps yet</p>`;
  }
  return (
    `<ol class="timeline">` +
    steps
      .map(
        (step, i) =>
          `<li><button data-step-index="${i}">${timelineLabel(step)}</button></li>`,
      )
      .join("") +
    `</ol>`
  );
}

/** The whole session screen (timeline renders separately from the trace). */
export function renderSession(view: SessionView): string {
  const opts = { enabledByUid: enabledByUid(view) };
  return (
    `<section class="panel controls" id="controls">${renderControls(view)}</section>` +
    `<section class="panel program"><h2>program</h2>` +
    `<div class="prog">${renderProgram(view.program, opts)}</div></section>` +
    `<section class="panel enabled"><h2>enabled steps</h2>${renderEnabled(view)}</section>` +
    `<section class="panel sigma"><h2>state σ</h2>${renderSigma(view.state)}</section>` +
    `<section class="panel delta"><h2>reversal δ</h2><div class="delta-grid">` +
    `${renderDelta(view.delta)}</div></section>`
  );
}
