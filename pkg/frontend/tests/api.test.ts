import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { startWithQuestion } from "./fixtures.js";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function clientReturning(
  response: Response | (() => Response),
): { client: ApiClient; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const client = new ApiClient("http://api.test", async (url, init) => {
    calls.push({ url, init });
    return typeof response === "function" ? response() : response;
  });
  return { client, calls };
}

describe("request shaping", () => {
  it("POSTs a session start as JSON against the base URL", async () => {
    const { client, calls } = clientReturning(
      jsonResponse(201, startWithQuestion),
    );
    const body = await client.startSession("s1", "UPDATE");

    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("http://api.test/sessions");
    expect(calls[0].init?.method).toBe("POST");
    const headers = calls[0].init?.headers as Record<string, string>;
    expect(headers["Content-Type"]).toBe("application/json");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual({
      student: "s1",
      desired: "UPDATE",
    });
    expect(body.question?.leaf).toBe("insert_select");
  });

  it("GETs the current question without a body", async () => {
    const { client, calls } = clientReturning(
      jsonResponse(200, { status: "active", question: null, recommendation: null }),
    );
    await client.currentQuestion("abc123").catch(() => undefined);
    expect(calls[0].url).toBe("http://api.test/sessions/abc123/question");
    expect(calls[0].init?.method).toBe("GET");
    expect(calls[0].init?.body).toBeUndefined();
  });

  it("URL-encodes the student in history lookups", async () => {
    const { client, calls } = clientReturning(
      jsonResponse(200, { student: "a b", sessions: [] }),
    );
    await client.studentHistory("a b");
    expect(calls[0].url).toBe("http://api.test/students/a%20b/history");
  });
});

describe("scripted clock hook", () => {
  it("sends queued moments once and then stops", async () => {
    const { client, calls } = clientReturning(() =>
      jsonResponse(200, { status: "ok" }),
    );
    client.queueClock(["2015-11-03T11:08:54Z", "2015-11-03T11:09:27Z"]);
    await client.health();
    await client.health();

    const first = calls[0].init?.headers as Record<string, string>;
    const second = calls[1].init?.headers as Record<string, string>;
    expect(first["X-Clock"]).toBe("2015-11-03T11:08:54Z,2015-11-03T11:09:27Z");
    expect(second["X-Clock"]).toBeUndefined();
  });

  it("sends no clock header by default", async () => {
    const { client, calls } = clientReturning(jsonResponse(200, { status: "ok" }));
    await client.health();
    const headers = calls[0].init?.headers as Record<string, string>;
    expect(headers["X-Clock"]).toBeUndefined();
  });
});

describe("error mapping", () => {
  it("turns an error body into a typed domain error", async () => {
    const { client } = clientReturning(
      jsonResponse(422, {
        code: "UnknownDesiredConcept",
        message: "no concept named 'DROP'",
      }),
    );
    const err = await client
      .startSession("s1", "DROP")
      .then(() => null, (e: unknown) => e);

    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.status).toBe(422);
    expect(apiErr.code).toBe("UnknownDesiredConcept");
    expect(apiErr.message).toBe("no concept named 'DROP'");
    expect(apiErr.retryable).toBe(false);
  });

  it("falls back to the HTTP status for non-JSON error bodies", async () => {
    const { client } = clientReturning(
      new Response("<html>oops</html>", { status: 500 }),
    );
    const err = (await client.health().catch((e: unknown) => e)) as ApiError;
    expect(err.status).toBe(500);
    expect(err.code).toBe("Http500");
    expect(err.retryable).toBe(true);
  });

  it("wraps transport failures as a retryable network error", async () => {
    const client = new ApiClient("http://api.test", async () => {
      throw new TypeError("fetch failed");
    });
    const err = (await client.health().catch((e: unknown) => e)) as ApiError;
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
    expect(err.code).toBe("NetworkError");
    expect(err.retryable).toBe(true);
  });
});
