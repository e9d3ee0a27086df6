/**
 * Browser bootstrap: wires the pure renderer and the session controller to
 * the document. All state lives in the controller; every change re-renders
 * from the latest view.
 */

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { renderSession, renderTimeline } from "./render.js";
import { openReplayAt, ReplicaSession } from "./timeline.js";
import type { SessionView, TraceDocument } from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function parseInit(text: string): Record<string, string> {
  const init: Record<string, string> = {};
  for (const line of text.split(/[\n,]/)) {
    const trimmed = line.trim();
    if (!trimmed) {
      continue;
    }
    const eq = trimmed.indexOf("=");
    if (eq < 1) {
      throw new Error(`initial values are NAME=VALUE lines, got "${trimmed}"`);
    }
    init[trimmed.slice(0, eq).trim()] = trimmed.slice(eq + 1).trim();
  }
  return init;
}

let replica: ReplicaSession | null = null;

async function refreshTimeline(ctl: SessionController): Promise<void> {
  const panel = el("timeline");
  if (ctl.sessionId === null) {
    panel.innerHTML = "";
    return;
  }
  try {
    const doc: TraceDocument = await ctl.api.trace(ctl.sessionId);
    panel.innerHTML = renderTimeline(doc.steps);
  } catch {
    // A dropped session leaves the old timeline; the next action fixes it.
  }
}

function showReplica(r: ReplicaSession): void {
  replica = r;
  el("whatif").innerHTML =
    `<div class="modal"><div class="modal-head">` +
    `<span>replay inspection — session ${r.id}</span>` +
    `<button id="whatif-close">close</button></div>` +
    `<div class="modal-body">${renderSession(r.view)}</div></div>`;
}

async function closeReplica(): Promise<void> {
  if (replica !== null) {
    await api.deleteSession(replica.id).catch(() => {});
    replica = null;
  }
  el("whatif").innerHTML = "";
}

export function boot(): void {
  const ctl = new SessionController(api, (view: SessionView | null) => {
    el("app").innerHTML = view === null ? "" : renderSession(view);
    void refreshTimeline(ctl);
  });

  el<HTMLFormElement>("create-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const source = el<HTMLTextAreaElement>("source").value;
    const policy = el<HTMLSelectElement>("policy").value;
    const seed = el<HTMLInputElement>("seed").value;
    const initText = el<HTMLTextAreaElement>("init").value;
    void (async () => {
      try {
        await ctl.close();
        await closeReplica();
        await ctl.create({
          source,
          policy,
          seed: seed === "" ? null : seed,
          init: parseInit(initText),
        });
      } catch (err) {
        el("app").innerHTML = `<p class="error">${String(err)}</p>`;
      }
    })();
  });

  el("app").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      "[data-choice], #btn-step, #btn-back, #btn-flip, #btn-run",
    );
    if (!target) {
      return;
    }
    if (target.dataset.choice !== undefined) {
      void ctl.chooseAndStep(Number(target.dataset.choice));
    } else if (target.id === "btn-step") {
      void ctl.stepForward();
    } else if (target.id === "btn-back") {
      void ctl.stepBack();
    } else if (target.id === "btn-flip") {
      void ctl.flip();
    } else if (target.id === "btn-run") {
      void ctl.runUntil("terminal");
    }
  });

  el("timeline").addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      "[data-step-index]",
    );
    if (target && ctl.sessionId !== null) {
      const index = Number(target.dataset.stepIndex);
      void openReplayAt(api, ctl.sessionId, index).then(showReplica);
    }
  });

  el("whatif").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).id === "whatif-close") {
      void closeReplica();
    }
  });

  document.addEventListener("keydown", (event) => {
    if (
      event.target instanceof HTMLTextAreaElement ||
      event.target instanceof HTMLInputElement
    ) {
      return;
    }
    if (event.key === " " || event.key === "s") {
      event.preventDefault();
      void ctl.stepForward();
    } else if (event.key === "b") {
      void ctl.stepBack();
    } else if (event.key === "f") {
      void ctl.flip();
    }
  });

  ctl.startPolling(2000);
}

if (typeof document !== "undefined") {
  boot();
}
