/** Thin typed clients for the search service HTTP interface. */

import type { FieldType, UISearchState } from "./state.js";

export interface BestChunk {
  field_type: FieldType;
  chunk_index: number;
  chunk_text: string;
}

export interface SearchResult {
  arc_id: string;
  title: string;
  final_score: number;
  document_score: number;
  chunk_max_score: number;
  best_chunk: BestChunk;
  boosted: boolean;
  summary?: string;
}

export interface SearchParams {
  alpha: number;
  beta: number;
  gamma: number;
  k: number;
}

export interface SearchResponse {
  results: SearchResult[];
  params: SearchParams;
  warning?: string;
}

export interface ArcDocumentJson {
  arc_id: string;
  title: string;
  description: string;
  people: string[];
  publications: string[];
  studies: string[];
  assays: string[];
  parameters: { name: string; value: string }[];
  version: number;
}

export interface ServiceError {
  code: string;
  message: string;
  field?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ServiceError,
  ) {
    super(`${detail.code}: ${detail.message}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface SearchClientOptions {
  baseUrl?: string;
  fetchImpl?: FetchLike;
}

async function raiseForError(response: Response): Promise<void> {
  if (response.ok) return;
  let detail: ServiceError = { code: "http_error", message: response.statusText };
  try {
    const body = (await response.json()) as { error?: ServiceError };
    if (body.error) detail = body.error;
  } catch {
    // non-JSON error body: keep the status-text fallback
  }
  throw new ApiError(response.status, detail);
}

export class SearchClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(options: SearchClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  async search(state: UISearchState): Promise<SearchResponse> {
    const body = {
      text: state.query,
      k: state.topK,
      alpha: state.alpha,
      filters: state.filters.map((f) => ({ field_type: f.fieldType, match: f.match })),
    };
    const response = await this.fetchImpl(`${this.baseUrl}/search`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    await raiseForError(response);
    return (await response.json()) as SearchResponse;
  }

  async getArc(arcId: string): Promise<ArcDocumentJson> {
    const response = await this.fetchImpl(`${this.baseUrl}/arcs/${encodeURIComponent(arcId)}`);
    await raiseForError(response);
    return (await response.json()) as ArcDocumentJson;
  }
}
