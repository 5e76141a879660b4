/**
 * Thin client for the exercise service. Every call carries the bearer token;
 * errors surface as exceptions with the HTTP status attached so the editor
 * can distinguish "draw something first" (409) from real failures.
 */

import type { CdxDocument, CheckResult } from "./model.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface ExerciseInfo {
  exerciseId: string;
  problemText: string;
  vocabulary?: string[];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      headers: {
        Authorization: `Bearer ${this.token}`,
        "Content-Type": "application/json",
        ...(init.headers ?? {}),
      },
    });
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
    return response;
  }

  async getExercise(exerciseId: string): Promise<ExerciseInfo> {
    const response = await this.request(`/api/exercises/${exerciseId}`);
    return (await response.json()) as ExerciseInfo;
  }

  async createSession(exerciseId: string, learnerId: string): Promise<string> {
    const response = await this.request("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ exerciseId, learnerId }),
    });
    return ((await response.json()) as { sessionId: string }).sessionId;
  }

  async putDiagram(sessionId: string, doc: CdxDocument): Promise<void> {
    await this.request(`/api/sessions/${sessionId}/diagram`, {
      method: "PUT",
      body: JSON.stringify(doc),
    });
  }

  async submit(sessionId: string): Promise<void> {
    await this.request(`/api/sessions/${sessionId}/submit`, { method: "POST" });
  }

  async check(sessionId: string): Promise<CheckResult> {
    const response = await this.request(`/api/sessions/${sessionId}/check`, {
      method: "POST",
    });
    return (await response.json()) as CheckResult;
  }
}
