import { describe, expect, it } from "vitest";

import { ApiError, CockpitApi } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

interface Call {
  url: string;
  init?: RequestInit;
}

function clientWith(responses: Response[]): { api: CockpitApi; calls: Call[] } {
  const calls: Call[] = [];
  const api = new CockpitApi("", async (url, init) => {
    calls.push({ url, init });
    const next = responses.shift();
    if (!next) {
      throw new Error("no scripted response left");
    }
    return next;
  });
  return { api, calls };
}

describe("CockpitApi", () => {
  it("returns parsed bodies from read endpoints", async () => {
    const { api, calls } = clientWith([jsonResponse(200, { phases: [{ id: "PH-1" }] })]);
    const payload = await api.phases();
    expect(payload.phases[0].id).toBe("PH-1");
    expect(calls[0].url).toBe("/api/phases/order");
    expect(calls[0].init).toBeUndefined();
  });

  it("builds the long-poll query from after and timeout", async () => {
    const { api, calls } = clientWith([jsonResponse(200, { issue: "ISS-1", events: [] })]);
    await api.events("ISS-1", 7, 15);
    expect(calls[0].url).toBe("/api/loop/ISS-1/events?after=7&timeout=15");
  });

  it("posts open with a JSON body", async () => {
    const { api, calls } = clientWith([jsonResponse(200, { issue: "ISS-1", state: "issue_opened" })]);
    await api.open("ISS-1", { seed: 3, max_iterations: 5 });
    expect(calls[0].url).toBe("/api/loop/ISS-1/open");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ seed: 3, max_iterations: 5 });
  });

  it("posts bodyless loop actions", async () => {
    const { api, calls } = clientWith([jsonResponse(200, { state: "plan_approved" })]);
    await api.approve("ISS-2");
    expect(calls[0].url).toBe("/api/loop/ISS-2/approve");
    expect(calls[0].init?.method).toBe("POST");
    expect(calls[0].init?.body).toBeUndefined();
  });

  it("surfaces the server error body as ApiError", async () => {
    const { api } = clientWith([
      jsonResponse(409, { error: "wrong-state", detail: "cannot approve in state tests_run" }),
    ]);
    const failure = await api.approve("ISS-1").catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    const apiError = failure as ApiError;
    expect(apiError.status).toBe(409);
    expect(apiError.code).toBe("wrong-state");
    expect(apiError.detail).toBe("cannot approve in state tests_run");
    expect(apiError.message).toBe("wrong-state: cannot approve in state tests_run");
  });

  it("falls back to the status text when the error body is not JSON", async () => {
    const { api } = clientWith([new Response("boom", { status: 500, statusText: "Internal Server Error" })]);
    const failure = await api.summary().catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).code).toBe("http-error");
    expect((failure as ApiError).detail).toBe("Internal Server Error");
  });

  it("escapes issue ids in paths", async () => {
    const { api, calls } = clientWith([jsonResponse(200, { node: "a/b", impacted: [] })]);
    await api.impact("a/b");
    expect(calls[0].url).toBe("/api/graph/impact/a%2Fb");
  });
});
