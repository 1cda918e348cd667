/**
 * Runtime schemas for every prediction-service payload.
 *
 * The server is the source of truth; these schemas are checked against
 * captured responses in the test suite, so a server-side field change
 * fails loudly here instead of silently rendering garbage.
 */

import { z } from "zod";

export const PredictionStatus = z.enum(["ok", "supercritical", "insufficient_data"]);
export type PredictionStatus = z.infer<typeof PredictionStatus>;

export const ArticleSummary = z.object({
  id: z.string(),
  post_time: z.number(),
  observed_size: z.number().int().nonnegative(),
  final_size: z.number().int().nonnegative().nullable(),
});
export type ArticleSummary = z.infer<typeof ArticleSummary>;

export const ArticleList = z.array(ArticleSummary);

export const PredictionPoint = z.object({
  time_s: z.number(),
  status: PredictionStatus,
  predicted_final: z.number().nullable(),
  n_star_used: z.number(),
  model_tag: z.string(),
  p_used: z.number().nullable(),
});
export type PredictionPoint = z.infer<typeof PredictionPoint>;

/** -1 marks "no prediction" and must stay out of averages. */
export const APE_FAILED = -1;

export const ApeRow = z.object({
  time_s: z.number(),
  ape1: z.number(),
  ape2: z.number(),
  diff: z.number(),
});
export type ApeRow = z.infer<typeof ApeRow>;

export const PredictionResponse = z.object({
  article_id: z.string(),
  model: z.string(),
  series: z.object({
    times: z.array(z.number()),
    r: z.array(z.number()),
    n: z.array(z.number()),
    n_eff: z.array(z.number()),
    p: z.array(z.number().nullable()),
    p_adj: z.array(z.number().nullable()),
    lambda: z.array(z.number().nullable()),
  }),
  points: z.array(PredictionPoint),
  ape: z.array(ApeRow),
});
export type PredictionResponse = z.infer<typeof PredictionResponse>;

export const Sign = z.enum(["+", "-"]);
export type Sign = z.infer<typeof Sign>;

export const WhatIfEntry = z.object({
  event_id: z.number().int(),
  degree: z.number().int(),
  big_node: z.boolean(),
  delete_p: z.number().nullable(),
  delete_delta_p: z.number().nullable(),
  delete_bound: z.number().nullable(),
  delete_sign: Sign.nullable(),
  add_p: z.number().nullable(),
  add_bound: z.number().nullable(),
  add_sign: Sign.nullable(),
});
export type WhatIfEntry = z.infer<typeof WhatIfEntry>;

export const WhatIfResponse = z.object({
  article_id: z.string(),
  frame_index: z.number().int(),
  t_eval: z.number(),
  n_init: z.number(),
  baseline_p: z.number(),
  baseline_bound: z.number(),
  entries: z.array(WhatIfEntry),
});
export type WhatIfResponse = z.infer<typeof WhatIfResponse>;

export const PropagationNode = z.object({
  event_id: z.number().int(),
  user_id: z.string(),
  degree: z.number().int(),
  time_s: z.number(),
  channel: z.string(),
});
export type PropagationNode = z.infer<typeof PropagationNode>;

export const PropagationLink = z.object({
  child: z.number().int(),
  parent: z.number().int(),
  parent_frame: z.number().int().nullable(),
  from_previous_frame: z.boolean(),
});
export type PropagationLink = z.infer<typeof PropagationLink>;

export const PropagationResponse = z.object({
  article_id: z.string(),
  frame: z.number().int(),
  frame_bounds_s: z.tuple([z.number(), z.number()]),
  channel_counts: z.record(z.number().int()),
  big_nodes: z.array(PropagationNode),
  small_nodes: z.array(PropagationNode),
  links: z.array(PropagationLink),
  portrait: z.object({
    age_bands: z.record(z.number().int()),
    genders: z.record(z.number().int()),
    regions: z.record(z.number().int()),
  }),
});
export type PropagationResponse = z.infer<typeof PropagationResponse>;

export const RecommendationCandidate = z.object({
  n_init: z.number(),
  mean_ape: z.number().nullable(),
  ape_series: z.array(z.number()),
});
export type RecommendationCandidate = z.infer<typeof RecommendationCandidate>;

export const RecommendationResponse = z.object({
  article_id: z.string(),
  best_n_init: z.number(),
  reference_size: z.number(),
  times: z.array(z.number()),
  candidates: z.array(RecommendationCandidate),
});
export type RecommendationResponse = z.infer<typeof RecommendationResponse>;

export const HistoryEntry = z.object({
  n_init: z.number(),
  timestamp: z.number(),
  ape_series: z.array(z.number()),
});
export type HistoryEntry = z.infer<typeof HistoryEntry>;

export const HistoryResponse = z.object({
  session_id: z.string(),
  entries: z.array(HistoryEntry),
});
export type HistoryResponse = z.infer<typeof HistoryResponse>;

export const ErrorBody = z.object({
  error: z.enum(["unknown_article", "insufficient_data", "out_of_window", "bad_request"]),
  detail: z.string(),
});
export type ErrorBody = z.infer<typeof ErrorBody>;
