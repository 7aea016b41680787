/** Thin typed client for the statviz HTTP API. */

import type {
  ApiError,
  Candidate,
  IconOption,
  PaletteOption,
  ReplaceSpec,
  SessionResponse,
  TemplateEntry,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: ApiError;

  constructor(status: number, body: ApiError) {
    super(body.diagnostic ?? body.error);
    this.status = status;
    this.body = body;
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const text = await response.text();
    let body: unknown = {};
    try {
      body = text ? JSON.parse(text) : {};
    } catch {
      body = { error: `bad JSON from ${path}` };
    }
    if (!response.ok) {
      throw new ApiRequestError(response.status, body as ApiError);
    }
    return body as T;
  }

  createSession(statement: string, seed = 0, top = 8): Promise<SessionResponse> {
    return this.json("/api/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ statement, seed, top }),
    });
  }

  listCandidates(sessionId: string, top = 8): Promise<{ candidates: Candidate[] }> {
    return this.json(`/api/sessions/${sessionId}/candidates?top=${top}`);
  }

  refine(sessionId: string, candidateId: string, replace: ReplaceSpec): Promise<Candidate> {
    return this.json<{ candidate: Candidate }>(
      `/api/sessions/${sessionId}/candidates/${candidateId}/refine`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ replace }),
      },
    ).then((r) => r.candidate);
  }

  icons(query: string, slotKind: string | null, k = 8): Promise<IconOption[]> {
    const params = new URLSearchParams({ query, k: String(k) });
    if (slotKind) params.set("slot_kind", slotKind);
    return this.json<{ results: IconOption[] }>(`/api/assets/icons?${params}`).then(
      (r) => r.results,
    );
  }

  palettes(query: string, k = 8): Promise<PaletteOption[]> {
    const params = new URLSearchParams({ query, k: String(k) });
    return this.json<{ results: PaletteOption[] }>(`/api/assets/palettes?${params}`).then(
      (r) => r.results,
    );
  }

  saveTemplate(candidateId: string, label: string): Promise<string> {
    return this.json<{ template_id: string }>("/api/templates", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ candidate_id: candidateId, label }),
    }).then((r) => r.template_id);
  }

  listTemplates(): Promise<TemplateEntry[]> {
    return this.json<{ templates: TemplateEntry[] }>("/api/templates").then(
      (r) => r.templates,
    );
  }

  async exportSvg(candidateId: string): Promise<string> {
    const response = await this.fetchFn(`${this.base}/api/export/${candidateId}.svg`);
    if (!response.ok) {
      throw new ApiRequestError(response.status, (await response.json()) as ApiError);
    }
    return response.text();
  }

  async templateSvg(templateId: string): Promise<string> {
    const response = await this.fetchFn(`${this.base}/api/templates/${templateId}/svg`);
    if (!response.ok) {
      throw new ApiRequestError(response.status, (await response.json()) as ApiError);
    }
    return response.text();
  }
}
