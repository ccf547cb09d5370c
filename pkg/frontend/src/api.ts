import type {
  AlignmentResponse,
  Decision,
  DecisionsResponse,
  GoldEntitiesResponse,
  SessionDoc,
  SessionsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

/** Thin typed client; the UI talks to the service exclusively through this. */
export class ApiClient {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  listSessions(): Promise<SessionsResponse> {
    return request(this.url("/sessions"));
  }

  getSession(id: string): Promise<SessionDoc> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}`));
  }

  getAlignment(id: string, kind: "class" | "objectProperty" = "class"): Promise<AlignmentResponse> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}/alignment?kind=${kind}`));
  }

  postDecisions(id: string, decisions: Decision[], revision?: number): Promise<DecisionsResponse> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}/decisions`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(revision === undefined ? { decisions } : { decisions, revision }),
    });
  }

  advance(id: string, input: Record<string, unknown> | null): Promise<SessionDoc> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}/advance`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ input }),
    });
  }

  supervise(id: string, action: "continue" | "stop" | "inject", guidance = ""): Promise<SessionDoc> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}/supervise`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ action, guidance }),
    });
  }

  getReport(id: string): Promise<Record<string, unknown>> {
    return request(this.url(`/sessions/${encodeURIComponent(id)}/report`));
  }

  goldEntities(): Promise<GoldEntitiesResponse> {
    return request(this.url("/gold/entities"));
  }
}
