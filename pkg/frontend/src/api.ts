// Thin typed client over the annotation HTTP API. No state, no model
// logic: every method is one request, errors become ApiError.

import type {
  LabelRequest,
  LabelResponse,
  PartitionsResponse,
  RetrainResponse,
  SpeechesResponse,
  StatusResponse,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly kind: string,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = '',
    private readonly token: string | null = null,
  ) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers['Content-Type'] = 'application/json';
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, 'NetworkError', String(err));
    }
    if (!response.ok) {
      let kind = `HTTP ${response.status}`;
      let detail = response.statusText;
      try {
        const body = await response.json();
        kind = body.error ?? kind;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body: keep the status line
      }
      throw new ApiError(response.status, kind, detail);
    }
    return response.json() as Promise<T>;
  }

  status(): Promise<StatusResponse> {
    return this.request<StatusResponse>('/api/status', {
      headers: this.headers(false),
    });
  }

  suggestions(limit: number): Promise<SpeechesResponse> {
    return this.request<SpeechesResponse>(
      `/api/speeches?status=unlabeled&limit=${limit}`,
      { headers: this.headers(false) },
    );
  }

  postLabel(label: LabelRequest): Promise<LabelResponse> {
    return this.request<LabelResponse>('/api/labels', {
      method: 'POST',
      headers: this.headers(true),
      body: JSON.stringify(label),
    });
  }

  retrain(): Promise<RetrainResponse> {
    return this.request<RetrainResponse>('/api/retrain', {
      method: 'POST',
      headers: this.headers(false),
    });
  }

  partitions(minuteId: string): Promise<PartitionsResponse> {
    return this.request<PartitionsResponse>(
      `/api/partitions/${encodeURIComponent(minuteId)}`,
      { headers: this.headers(false) },
    );
  }

  async exportLabelsCsv(): Promise<string> {
    const response = await this.fetchImpl(this.base + '/api/export/labels', {
      headers: this.headers(false),
    });
    if (!response.ok) {
      throw new ApiError(response.status, `HTTP ${response.status}`, response.statusText);
    }
    return response.text();
  }
}
