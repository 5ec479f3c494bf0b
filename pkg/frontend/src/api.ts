/**
 * Typed client for the configuration service. Every mutation returns the
 * full server-side state; the UI never computes propagation on its own.
 */

import type { DecideDoc, FeatureState, ModelDoc, SessionDoc, Status } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

async function parseError(response: Response): Promise<never> {
  let detail: unknown = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && body.detail !== undefined) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export interface SessionView {
  session: string;
  model: string;
  states: SessionDoc["states"];
  status: Status;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(`${this.baseUrl}${path}`, init);
    if (!response.ok) await parseError(response);
    return response;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  createSession(model: string): Promise<SessionDoc> {
    return this.json<SessionDoc>("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model }),
    });
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.json<SessionDoc>(`/sessions/${id}`);
  }

  decide(id: string, feature: string, value: FeatureState): Promise<DecideDoc> {
    return this.json<DecideDoc>(`/sessions/${id}/decide`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ feature, value }),
    });
  }

  undo(id: string): Promise<SessionDoc> {
    return this.json<SessionDoc>(`/sessions/${id}/undo`, { method: "POST" });
  }

  finalize(id: string): Promise<SessionDoc> {
    return this.json<SessionDoc>(`/sessions/${id}/finalize`, { method: "POST" });
  }

  async generate(id: string): Promise<Blob> {
    const response = await this.request(`/sessions/${id}/generate`, { method: "POST" });
    return response.blob();
  }

  getModel(name: string): Promise<ModelDoc> {
    return this.json<ModelDoc>(`/model/${name}`);
  }
}
