/** Typed client for the service API.
 *
 * The fetch implementation is injectable so tests can drive the client
 * without a server. Non-2xx responses become ApiError carrying the
 * server's {error, detail} body verbatim.
 */

import type {
  BundleSummary,
  CoverageReport,
  ImpactReport,
  IssueInfo,
  LoopEvent,
  PhaseInfo,
  PromptReport,
  RunInfo,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface OpenOptions {
  agent?: string;
  seed?: number;
  max_iterations?: number;
}

export class CockpitApi {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  summary(): Promise<BundleSummary> {
    return this.request("/api/bundle/summary");
  }

  phases(): Promise<{ phases: PhaseInfo[] }> {
    return this.request("/api/phases/order");
  }

  issues(): Promise<{ issues: IssueInfo[] }> {
    return this.request("/api/issues");
  }

  coverage(): Promise<CoverageReport> {
    return this.request("/api/coverage");
  }

  impact(nodeId: string): Promise<ImpactReport> {
    return this.request(`/api/graph/impact/${encodeURIComponent(nodeId)}`);
  }

  prompts(): Promise<{ reports: PromptReport[] }> {
    return this.request("/api/reports/prompts");
  }

  events(issue: string, after: number, timeoutS: number): Promise<{ issue: string; events: LoopEvent[] }> {
    const query = `?after=${after}&timeout=${timeoutS}`;
    return this.request(`/api/loop/${encodeURIComponent(issue)}/events${query}`);
  }

  open(issue: string, options: OpenOptions = {}): Promise<RunInfo> {
    return this.post(issue, "open", options);
  }

  plan(issue: string): Promise<RunInfo> {
    return this.post(issue, "plan");
  }

  approve(issue: string): Promise<RunInfo> {
    return this.post(issue, "approve");
  }

  step(issue: string): Promise<RunInfo> {
    return this.post(issue, "step");
  }

  runToCompletion(issue: string): Promise<RunInfo> {
    return this.post(issue, "run-to-completion");
  }

  private post(issue: string, action: string, body?: object): Promise<RunInfo> {
    const init: RequestInit = { method: "POST" };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    return this.request(`/api/loop/${encodeURIComponent(issue)}/${action}`, init);
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const record = (body ?? {}) as Record<string, unknown>;
      const code = typeof record.error === "string" ? record.error : "http-error";
      const detail = typeof record.detail === "string" ? record.detail : response.statusText;
      throw new ApiError(response.status, code, detail);
    }
    return body as T;
  }
}
