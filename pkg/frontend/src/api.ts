/**
 * Thin typed client over the session service's HTTP+JSON endpoints.
 *
 * The fetch implementation is injectable so tests can drive the client
 * against a fake; the default is the platform fetch (browser or node).
 */

import type {
  CreateSessionBody,
  CreateSessionResult,
  RunTarget,
  SessionView,
  StepChoice,
  TraceDocument,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly payload: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    // Wrapped so the platform fetch keeps its own receiver.
    private readonly fetchFn: FetchLike = (input, init) =>
      (globalThis.fetch as unknown as FetchLike)(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    let payload: unknown;
    try {
      payload = await response.json();
    } catch {
      payload = {};
    }
    if (response.status >= 400) {
      const record =
        payload && typeof payload === "object"
          ? (payload as Record<string, unknown>)
          : {};
      const message =
        typeof record.error === "string"
          ? record.error
          : `request failed with status ${response.status}`;
      throw new ApiError(response.status, message, record);
    }
    return payload as T;
  }

  createSession(body: CreateSessionBody): Promise<CreateSessionResult> {
    return this.request("POST", "/sessions", body);
  }

  getView(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  step(id: string, choice: StepChoice): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/step`, { choice });
  }

  flip(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/flip`);
  }

  run(id: string, until: RunTarget): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/run`, { until });
  }

  trace(id: string): Promise<TraceDocument> {
    return this.request("GET", `/sessions/${id}/trace`);
  }

  deleteSession(id: string): Promise<void> {
    return this.request("DELETE", `/sessions/${id}`);
  }
}
