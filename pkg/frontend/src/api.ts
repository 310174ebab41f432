// Thin typed client for the local session service. The JSON report schema
// is the only contract; nothing here derives state the server already owns.

import type { OutcomeJson, TypeJson, ValueJson } from "./values.js";

export interface WitnessJson {
  args: ValueJson[];
  args_text: string;
  partition: Record<string, OutcomeJson>;
  classes: Record<string, string[]>;
  provenance: string;
  score: { total: number; tiebreak: string };
}

export interface SpecJson {
  name: string;
  params: { name: string; type: TypeJson }[];
  return_type: TypeJson;
  purpose: string | null;
  examples: { args: ValueJson[]; expected: ValueJson | "!error" }[];
  variant_tag: string | null;
}

export interface ReportJson {
  spec: SpecJson;
  witnesses: WitnessJson[];
  diagnostics: string[];
  meta: Record<string, unknown>;
}

export interface SessionView {
  session_id: string;
  survivors: number;
  history: Record<string, unknown>[];
  report: ReportJson;
  removed?: number;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request(url: string, init?: RequestInit): Promise<SessionView> {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `network failure: ${String(err)}`);
  }
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    // a non-JSON error body still maps to an ApiError below
  }
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : `request failed with status ${res.status}`;
    throw new ApiError(res.status, detail);
  }
  return body as SessionView;
}

function post(url: string, payload: unknown): Promise<SessionView> {
  return request(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export class Client {
  constructor(public baseUrl = "") {}

  createSession(fnspec: string, corpus: string, config?: Record<string, unknown>): Promise<SessionView> {
    const payload: Record<string, unknown> = { fnspec, corpus };
    if (config) payload.config = config;
    return post(`${this.baseUrl}/sessions`, payload);
  }

  getSession(id: string): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  resolveExample(id: string, args: ValueJson[], expected: ValueJson | "!error"): Promise<SessionView> {
    return post(`${this.baseUrl}/sessions/${id}/examples`, { args, expected });
  }

  editPurpose(id: string, purpose: string, reacquire = false): Promise<SessionView> {
    return post(`${this.baseUrl}/sessions/${id}/purpose`, { purpose, reacquire });
  }
}
