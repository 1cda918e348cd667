/**
 * Pure view models: server payloads in, render-ready structures out.
 *
 * No DOM and no arithmetic beyond layout bookkeeping — every number shown
 * to the user comes from the service unchanged. In particular the what-if
 * +/- signs are passed through verbatim, never recomputed client-side.
 */

import {
  APE_FAILED,
  PredictionResponse,
  PropagationResponse,
  RecommendationResponse,
  WhatIfResponse,
} from "./schemas.js";

// ---------------------------------------------------------------------------
// Prediction view
// ---------------------------------------------------------------------------

export interface ApeGlyph {
  timeS: number;
  /** APE against the one-day size; null when the model gave no prediction. */
  ape1: number | null;
  /** APE against the final size. */
  ape2: number | null;
  /** ape1 - ape2; near zero means the cascade finished within a day. */
  diff: number;
  failed: boolean;
}

export interface PredictionViewModel {
  articleId: string;
  model: string;
  /** Infectiousness curves: raw MLE and speed-adjusted, aligned on times. */
  curve: { timeS: number; r: number; p: number | null; pAdj: number | null }[];
  /** Safe-zone ceiling per time: the largest mean degree that keeps the
   * prediction finite, as reported by the server via the used bound. */
  safeZone: { timeS: number; nStarMax: number }[];
  markers: {
    timeS: number;
    status: "ok" | "supercritical" | "insufficient_data";
    predictedFinal: number | null;
  }[];
  apeGlyphs: ApeGlyph[];
}

export function predictionView(resp: PredictionResponse): PredictionViewModel {
  const curve = resp.series.times.map((t, i) => ({
    timeS: t,
    r: resp.series.r[i]!,
    p: resp.series.p[i] ?? null,
    pAdj: resp.series.p_adj[i] ?? null,
  }));
  return {
    articleId: resp.article_id,
    model: resp.model,
    curve,
    safeZone: resp.points.map((pt) => ({ timeS: pt.time_s, nStarMax: pt.n_star_used })),
    markers: resp.points.map((pt) => ({
      timeS: pt.time_s,
      status: pt.status,
      predictedFinal: pt.predicted_final,
    })),
    apeGlyphs: resp.ape.map((row) => ({
      timeS: row.time_s,
      ape1: row.ape1 === APE_FAILED ? null : row.ape1,
      ape2: row.ape2 === APE_FAILED ? null : row.ape2,
      diff: row.diff,
      failed: row.ape1 === APE_FAILED || row.ape2 === APE_FAILED,
    })),
  };
}

// ---------------------------------------------------------------------------
// Exploration (what-if) view
// ---------------------------------------------------------------------------

export interface DeltaRiverRow {
  eventId: number;
  degree: number;
  bigNode: boolean;
  /** Sign strings exactly as the server sent them. */
  deleteSign: "+" | "-" | null;
  addSign: "+" | "-" | null;
  deleteP: number | null;
  addP: number | null;
  /** |delta| for bar width; 0 when the counterfactual had no estimate. */
  deleteMagnitude: number;
}

export interface WhatIfViewModel {
  articleId: string;
  frameIndex: number;
  baselineP: number;
  baselineBound: number;
  rows: DeltaRiverRow[];
  bigNodeCount: number;
}

export function whatifView(resp: WhatIfResponse): WhatIfViewModel {
  const rows = [...resp.entries]
    .sort((a, b) => a.event_id - b.event_id)
    .map((e) => ({
      eventId: e.event_id,
      degree: e.degree,
      bigNode: e.big_node,
      deleteSign: e.delete_sign,
      addSign: e.add_sign,
      deleteP: e.delete_p,
      addP: e.add_p,
      deleteMagnitude: e.delete_delta_p === null ? 0 : Math.abs(e.delete_delta_p),
    }));
  return {
    articleId: resp.article_id,
    frameIndex: resp.frame_index,
    baselineP: resp.baseline_p,
    baselineBound: resp.baseline_bound,
    rows,
    bigNodeCount: rows.filter((r) => r.bigNode).length,
  };
}

// ---------------------------------------------------------------------------
// Propagation view
// ---------------------------------------------------------------------------

export interface PropagationViewModel {
  articleId: string;
  frame: number;
  /** Channel bars, tallest first; ties alphabetical for stable layout. */
  channelBars: { channel: string; count: number }[];
  /** Node packing split along the big-node axis. */
  packing: {
    big: { eventId: number; degree: number }[];
    small: { eventId: number; degree: number }[];
  };
  links: { child: number; parent: number; fromPreviousFrame: boolean }[];
  portrait: {
    ageBands: { band: string; count: number }[];
    genders: { gender: string; count: number }[];
    regions: { region: string; count: number }[];
  };
}

function sortedBars<T extends string>(
  counts: Record<string, number>,
  key: T,
): ({ [K in T]: string } & { count: number })[] {
  return Object.entries(counts)
    .sort(([ka, va], [kb, vb]) => vb - va || ka.localeCompare(kb))
    .map(([k, count]) => ({ [key]: k, count }) as { [K in T]: string } & { count: number });
}

export function propagationView(resp: PropagationResponse): PropagationViewModel {
  const pack = (nodes: { event_id: number; degree: number }[]) =>
    [...nodes]
      .sort((a, b) => b.degree - a.degree || a.event_id - b.event_id)
      .map((n) => ({ eventId: n.event_id, degree: n.degree }));
  return {
    articleId: resp.article_id,
    frame: resp.frame,
    channelBars: sortedBars(resp.channel_counts, "channel"),
    packing: { big: pack(resp.big_nodes), small: pack(resp.small_nodes) },
    links: resp.links.map((l) => ({
      child: l.child,
      parent: l.parent,
      fromPreviousFrame: l.from_previous_frame,
    })),
    portrait: {
      ageBands: Object.entries(resp.portrait.age_bands)
        .sort(([a], [b]) => a.localeCompare(b))
        .map(([band, count]) => ({ band, count })),
      genders: sortedBars(resp.portrait.genders, "gender"),
      regions: sortedBars(resp.portrait.regions, "region"),
    },
  };
}

// ---------------------------------------------------------------------------
// Recommendation view (faded candidate curves)
// ---------------------------------------------------------------------------

export interface RecommendationViewModel {
  articleId: string;
  bestNInit: number;
  curves: {
    nInit: number;
    meanApe: number | null;
    apeSeries: { timeS: number; ape: number | null }[];
    best: boolean;
    faded: boolean;
  }[];
}

export function recommendationView(resp: RecommendationResponse): RecommendationViewModel {
  return {
    articleId: resp.article_id,
    bestNInit: resp.best_n_init,
    curves: resp.candidates.map((c) => ({
      nInit: c.n_init,
      meanApe: c.mean_ape,
      apeSeries: c.ape_series.map((a, i) => ({
        timeS: resp.times[i]!,
        ape: a === APE_FAILED ? null : a,
      })),
      best: c.n_init === resp.best_n_init,
      faded: c.n_init !== resp.best_n_init,
    })),
  };
}
