import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, Client } from "./api";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("Client", () => {
  it("creates a session with the right request shape", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(201, { session_id: "abc", survivors: 3, history: [], report: {} }),
    );
    vi.stubGlobal("fetch", fetchMock);

    const view = await new Client().createSession("fn f() -> Int", "/corpus", { seed: 1 });
    expect(view.session_id).toBe("abc");
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/sessions");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body)).toEqual({
      fnspec: "fn f() -> Int",
      corpus: "/corpus",
      config: { seed: 1 },
    });
  });

  it("posts resolved examples in the wire encoding", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(200, { session_id: "abc", survivors: 2, history: [], report: {}, removed: 1 }),
    );
    vi.stubGlobal("fetch", fetchMock);

    const args = [{ type: "list" as const, value: [], elem: "float" }];
    const view = await new Client("http://host").resolveExample("abc", args, {
      type: "float",
      value: 0,
    });
    expect(view.removed).toBe(1);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("http://host/sessions/abc/examples");
    expect(JSON.parse(init.body)).toEqual({ args, expected: { type: "float", value: 0 } });
  });

  it("supports the should-error resolution", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(200, { session_id: "abc", survivors: 1, history: [], report: {} }),
    );
    vi.stubGlobal("fetch", fetchMock);

    await new Client().resolveExample("abc", [], "!error");
    expect(JSON.parse(fetchMock.mock.calls[0][1].body).expected).toBe("!error");
  });

  it("maps HTTP failures to ApiError with the server detail", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(jsonResponse(409, { detail: "space would become empty" })),
    );
    const err = await new Client().resolveExample("abc", [], "!error").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.message).toBe("space would become empty");
  });

  it("maps network failures to a status-0 ApiError", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("offline")));
    const err = await new Client().getSession("abc").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
  });

  it("posts purpose edits with the reacquire flag", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(200, { session_id: "abc", survivors: 3, history: [], report: {} }),
    );
    vi.stubGlobal("fetch", fetchMock);

    await new Client().editPurpose("abc", "clearer", true);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/sessions/abc/purpose");
    expect(JSON.parse(init.body)).toEqual({ purpose: "clearer", reacquire: true });
  });
});
