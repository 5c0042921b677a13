// Thin typed client over the session endpoints.  All mathematics stays
// server-side; this layer only moves documents.  Queries are idempotent
// until answered, so transient network failures retry the fetch.

import type {
  AnswerRequest,
  CreateSessionRequest,
  CreateSessionResponse,
  Outcome,
  SessionState,
  TranscriptEntry,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public body: unknown,
  ) {
    super(`${status}: ${code}`);
  }
}

async function readError(res: Response): Promise<ApiError> {
  let code = "unknown_error";
  let body: unknown = null;
  try {
    body = await res.json();
    const detail = (body as { detail?: { error?: string } }).detail;
    if (detail && detail.error) code = detail.error;
  } catch {
    // non-JSON error body; keep the generic code
  }
  return new ApiError(res.status, code, body);
}

export class ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = fetch,
    private retries = 2,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    let lastErr: unknown = null;
    for (let attempt = 0; attempt <= this.retries; attempt++) {
      try {
        const res = await this.fetchImpl(this.base + path);
        if (!res.ok) throw await readError(res);
        return (await res.json()) as T;
      } catch (err) {
        if (err instanceof ApiError) throw err;
        lastErr = err; // network failure: the read is idempotent, retry
      }
    }
    throw lastErr;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw await readError(res);
    return (await res.json()) as T;
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.postJson("/sessions", req);
  }

  getQuery(id: string): Promise<SessionState> {
    return this.getJson(`/sessions/${id}/query`);
  }

  postAnswer(id: string, answer: AnswerRequest): Promise<SessionState> {
    return this.postJson(`/sessions/${id}/answer`, answer);
  }

  getResult(id: string): Promise<Outcome> {
    return this.getJson(`/sessions/${id}/result`);
  }

  getTranscript(id: string): Promise<TranscriptEntry[]> {
    return this.getJson(`/sessions/${id}/transcript`);
  }
}

// Canonical encoding shared by tests on both sides of the wire: object
// keys sorted recursively, no insignificant whitespace.
export function canonicalJson(value: unknown): string {
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => JSON.stringify(k) + ":" + canonicalJson(v));
    return "{" + entries.join(",") + "}";
  }
  return JSON.stringify(value);
}
