/**
 * Session driving: the mutable shell around the pure renderer.
 *
 * Holds the latest view, forwards user gestures to the service, and
 * re-fetches on conflicts (HTTP 409) instead of failing — a conflict just
 * means the screen was stale, and the fresh view is the correction. Views
 * refresh by polling while idle; sessions only mutate on user action, so a
 * slow poll is purely a multi-tab courtesy.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  CreateSessionBody,
  RunTarget,
  SessionView,
  StepChoice,
} from "./types.js";

export type ViewListener = (view: SessionView | null) => void;

export class SessionController {
  view: SessionView | null = null;
  sessionId: string | null = null;
  busy = false;
  private pollHandle: ReturnType<typeof setInterval> | null = null;

  constructor(
    readonly api: ApiClient,
    private readonly onChange: ViewListener = () => {},
  ) {}

  private setView(view: SessionView | null): void {
    this.view = view;
    this.onChange(view);
  }

  /** Runs a service call; a 409 resolves to a re-fetched fresh view. */
  private async mutate(action: () => Promise<SessionView>): Promise<void> {
    if (this.sessionId === null) {
      return;
    }
    this.busy = true;
    try {
      this.setView(await action());
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.setView(await this.api.getView(this.sessionId));
        return;
      }
      throw err;
    } finally {
      this.busy = false;
    }
  }

  async create(body: CreateSessionBody): Promise<SessionView> {
    const result = await this.api.createSession(body);
    this.sessionId = result.id;
    this.setView(result.view);
    return result.view;
  }

  async close(): Promise<void> {
    if (this.sessionId !== null) {
      await this.api.deleteSession(this.sessionId).catch(() => {});
      this.sessionId = null;
      this.setView(null);
    }
  }

  async refresh(): Promise<void> {
    if (this.sessionId !== null) {
      this.setView(await this.api.getView(this.sessionId));
    }
  }

  /** Steps the clicked redex (or lets the session's policy pick). */
  async chooseAndStep(choice: StepChoice = "auto"): Promise<void> {
    await this.mutate(() => this.api.step(this.sessionId!, choice));
  }

  /** Steps in the forward sense, flipping first when needed. */
  async stepForward(): Promise<void> {
    if (this.view?.direction === "reverse") {
      await this.mutate(() => this.api.flip(this.sessionId!));
    }
    await this.chooseAndStep("auto");
  }

  /**
   * One step backward: flip+step from forward mode, plain step in reverse
   * mode. Backward stepping is enabled exactly when the sequencer is
   * positive — the single reverse step is then the one enabled redex.
   */
  stepBackEnabled(): boolean {
    return (
      this.view !== null &&
      this.view.status !== "error" &&
      this.view.sequencer !== "0"
    );
  }

  async stepBack(): Promise<void> {
    if (!this.stepBackEnabled()) {
      return;
    }
    if (this.view?.direction === "forward") {
      await this.mutate(() => this.api.flip(this.sessionId!));
    }
    await this.chooseAndStep("auto");
  }

  async flip(): Promise<void> {
    await this.mutate(() => this.api.flip(this.sessionId!));
  }

  async runUntil(until: RunTarget): Promise<void> {
    await this.mutate(() => this.api.run(this.sessionId!, until));
  }

  startPolling(intervalMs = 2000): void {
    this.stopPolling();
    this.pollHandle = setInterval(() => {
      if (!this.busy && this.sessionId !== null) {
        void this.refresh().catch(() => {});
      }
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.pollHandle !== null) {
      clearInterval(this.pollHandle);
      this.pollHandle = null;
    }
  }
}
