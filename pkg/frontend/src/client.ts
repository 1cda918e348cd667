/**
 * Thin typed client over the prediction service.
 *
 * Every response body is validated with the schemas before it reaches a
 * view; error statuses become ApiError with the server's typed error code.
 * The fetch implementation is injectable so tests run without a network.
 */

import { z } from "zod";
import {
  ArticleList,
  ArticleSummary,
  ErrorBody,
  HistoryEntry,
  HistoryResponse,
  PredictionResponse,
  PropagationResponse,
  RecommendationResponse,
  WhatIfResponse,
} from "./schemas.js";

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: ErrorBody["error"] | "unknown",
    readonly detail: string,
  ) {
    super(`${status} ${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface PredictionQuery {
  model?: string;
  nInit?: number;
  times?: number[];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private async request<T>(schema: z.ZodType<T>, path: string, init?: {
    method?: string;
    body?: unknown;
  }): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: init?.method ?? "GET",
      headers: init?.body !== undefined ? { "content-type": "application/json" } : undefined,
      body: init?.body !== undefined ? JSON.stringify(init.body) : undefined,
    });
    const payload = await resp.json();
    if (resp.status >= 400) {
      const parsed = ErrorBody.safeParse(payload);
      if (parsed.success) {
        throw new ApiError(resp.status, parsed.data.error, parsed.data.detail);
      }
      throw new ApiError(resp.status, "unknown", JSON.stringify(payload));
    }
    return schema.parse(payload);
  }

  listArticles(): Promise<ArticleSummary[]> {
    return this.request(ArticleList, "/articles");
  }

  prediction(articleId: string, query: PredictionQuery = {}): Promise<PredictionResponse> {
    const params = new URLSearchParams();
    if (query.model !== undefined) params.set("model", query.model);
    if (query.nInit !== undefined) params.set("n_init", String(query.nInit));
    if (query.times !== undefined) params.set("times", query.times.join(","));
    const qs = params.toString();
    return this.request(
      PredictionResponse,
      `/articles/${encodeURIComponent(articleId)}/prediction${qs ? "?" + qs : ""}`,
    );
  }

  whatif(articleId: string, frame: number, t: number, nInit?: number): Promise<WhatIfResponse> {
    return this.request(
      WhatIfResponse,
      `/articles/${encodeURIComponent(articleId)}/whatif`,
      { method: "POST", body: { frame, t, n_init: nInit ?? null } },
    );
  }

  propagation(articleId: string, frame: number): Promise<PropagationResponse> {
    return this.request(
      PropagationResponse,
      `/articles/${encodeURIComponent(articleId)}/propagation?frame=${frame}`,
    );
  }

  recommendation(articleId: string, grid?: number[]): Promise<RecommendationResponse> {
    const qs = grid !== undefined ? `?grid=${grid.join(",")}` : "";
    return this.request(
      RecommendationResponse,
      `/articles/${encodeURIComponent(articleId)}/recommendation${qs}`,
    );
  }

  history(sessionId: string): Promise<HistoryResponse> {
    return this.request(HistoryResponse, `/sessions/${encodeURIComponent(sessionId)}/history`);
  }

  appendHistory(
    sessionId: string,
    entry: { n_init: number; ape_series?: number[]; timestamp?: number },
  ): Promise<HistoryEntry> {
    return this.request(
      HistoryEntry,
      `/sessions/${encodeURIComponent(sessionId)}/history`,
      { method: "POST", body: { ape_series: [], ...entry } },
    );
  }
}
