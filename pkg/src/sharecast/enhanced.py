"""Speed-adjusted infectiousness, bounded mean degree, and what-if analysis.

The baseline predictor scales its infectiousness with a schedule trained on
another platform; here the scaling signal is the cascade's own propagation
speed. Reshare increments per timeframe are min-max normalized over the
frames observed so far (causal: no future data), and the current frame's
normalized speed multiplies the estimated infectiousness:

    p_t' = (ps_t - ps_min) / (ps_max - ps_min) * p_t

Because min-max normalization cancels any positive constant divisor, raw
increments stand in for speed without needing the (unknown) final size.

The adjusted infectiousness then bounds the mean-degree search space:
n_star_t = min(n_init, (1 - eps) / p_t'), keeping p_t' * n_star_t strictly
below 1 so a finite prediction always exists (the "safe zone").

What-if analysis recomputes the adjusted infectiousness with single sharing
records deleted from (or successively added back to) one timeframe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .baseline import (
    INSUFFICIENT_DATA,
    OK,
    PredictionPoint,
    baseline_series,
    estimate_p,
    exposure,
    predict_final,
)
from .evaluation import ape
from .types import (
    Cascade,
    InsufficientDataError,
    ModelParams,
    ShareEvent,
    TimeframeSchedule,
    frame_of,
)

#: Default candidate grid for mean-degree recommendation (log-spaced).
DEFAULT_DEGREE_GRID = (10.0, 20.0, 45.0, 100.0, 140.0, 200.0, 500.0, 1000.0)

#: Model variants exposed at every entry point.
MODEL_TAGS = ("seismic", "speed-only", "weseer")


def predict_series(
    cascade: Cascade,
    times: Sequence[float],
    params: ModelParams,
    model: str = "weseer",
    n_init: Optional[float] = None,
) -> list[PredictionPoint]:
    """Dispatch to one of the three model variants.

    "seismic" is the fixed-degree baseline, "speed-only" adjusts the
    infectiousness by propagation speed but keeps the fixed degree, and
    "weseer" additionally bounds the mean degree per timestamp.
    """
    if model == "seismic":
        return baseline_series(cascade, times, params, n_star=n_init)
    if model == "speed-only":
        return enhanced_series(cascade, times, params, n_init=n_init, bound=False,
                               model_tag="speed_adjusted")
    if model == "weseer":
        return enhanced_series(cascade, times, params, n_init=n_init, bound=True)
    raise ValueError(f"unknown model {model!r}; expected one of {MODEL_TAGS}")


def default_times(params: ModelParams) -> tuple[float, ...]:
    """Evaluation times: the schedule's interior and final boundaries, in seconds."""
    return tuple(b * 60.0 for b in params.schedule.boundaries_min[1:])


@dataclass(frozen=True)
class SpeedProfile:
    """Reshare increments per observed frame and their min-max norms.

    The last entry is the frame containing the evaluation time, counted with
    the reshares seen so far in it. If every increment is equal there is no
    signal to scale by and all norms are 1.
    """

    increments: tuple[float, ...]
    norms: tuple[float, ...]

    @property
    def current_norm(self) -> float:
        return self.norms[-1]


def minmax_norms(increments: Sequence[float]) -> tuple[float, ...]:
    inc = tuple(float(x) for x in increments)
    lo, hi = min(inc), max(inc)
    if hi == lo:
        return tuple(1.0 for _ in inc)
    return tuple((x - lo) / (hi - lo) for x in inc)


def _frame_at(t: float, schedule: TimeframeSchedule) -> int:
    # Observation at exactly the horizon belongs to the last frame.
    if t == schedule.horizon_s:
        return schedule.n_frames - 1
    return frame_of(t, schedule)


def frame_increments(cascade: Cascade, schedule: TimeframeSchedule, t: float) -> tuple[float, ...]:
    """Reshares gained in each frame up to and including the one containing t."""
    cur = _frame_at(t, schedule)
    counts = [0.0] * (cur + 1)
    for e in cascade.reshares:
        if e.time_s <= t:
            counts[min(_frame_at(e.time_s, schedule), cur)] += 1.0
    return tuple(counts)


def speed_profile(cascade: Cascade, schedule: TimeframeSchedule, t: float) -> SpeedProfile:
    inc = frame_increments(cascade, schedule, t)
    return SpeedProfile(increments=inc, norms=minmax_norms(inc))


def adjust_p(p_t: float, speed_norm: float) -> float:
    """Scale infectiousness by the normalized current propagation speed."""
    if not 0.0 <= speed_norm <= 1.0:
        raise ValueError("speed_norm must lie in [0, 1]")
    return speed_norm * p_t


def bound_degree(n_init: float, p_t_adj: float, eps: float = 0.01) -> float:
    """Clamp the mean-degree candidate into the safe zone for p_t_adj.

    With p_t_adj > 0 the result satisfies p_t_adj * n_star_t <= 1 - eps;
    with p_t_adj = 0 there is no pole and n_init passes through.
    """
    if n_init <= 0:
        raise ValueError("n_init must be positive")
    if p_t_adj <= 0:
        return n_init
    limit = 1.0 - eps
    cap = limit / p_t_adj
    # Division rounding can leave cap * p_t_adj one ulp above the limit;
    # nudge down so the safety product holds exactly.
    while cap * p_t_adj > limit:
        cap = math.nextafter(cap, 0.0)
    return min(n_init, cap)


def adjusted_infectiousness(cascade: Cascade, t: float, params: ModelParams) -> float:
    """p_t' at time t: MLE infectiousness times the causal speed norm."""
    p = params.alpha(t) * estimate_p(cascade, t, params.kernel, params.min_reshares)
    norm = speed_profile(cascade, params.schedule, t).current_norm
    return adjust_p(p, norm)


def enhanced_series(
    cascade: Cascade,
    times: Sequence[float],
    params: ModelParams,
    n_init: Optional[float] = None,
    bound: bool = True,
    model_tag: str = "weseer",
) -> list[PredictionPoint]:
    """Prediction series with speed-adjusted infectiousness.

    With ``bound=True`` the mean degree is clamped per timestamp, so the
    outcome is finite whenever any reshare has been observed. With
    ``bound=False`` ("speed-only" variant) the fixed mean degree is kept and
    the supercritical outcome is still possible.
    """
    n_init = params.n_star_default if n_init is None else n_init
    points = []
    for t in np.asarray(times, dtype=float):
        r_t = cascade.reshare_count(t)
        n_t, n_eff = exposure(cascade, t, params.kernel)
        try:
            p_adj = adjusted_infectiousness(cascade, t, params)
        except InsufficientDataError:
            points.append(PredictionPoint(float(t), INSUFFICIENT_DATA, None, n_init, model_tag))
            continue
        if bound:
            n_star_t = bound_degree(n_init, p_adj, params.epsilon_subcritical)
            # The clamp already keeps p_adj * n_star_t <= 1 - eps, a safe
            # distance from the pole; the hard supercritical test is at 1.
            status, value = predict_final(r_t, n_t, n_eff, p_adj, n_star_t, eps=0.0)
        else:
            n_star_t = n_init
            status, value = predict_final(r_t, n_t, n_eff, p_adj, n_star_t, params.epsilon_subcritical)
        points.append(PredictionPoint(float(t), status, value, n_star_t, model_tag, p_used=p_adj))
    return points


@dataclass(frozen=True)
class Recommendation:
    """Outcome of the mean-degree sweep: best initial value plus the full
    per-candidate APE history (the faded-curve data)."""

    best_n_init: float
    ape_series: dict[float, tuple[float, ...]]  # candidate -> APE per time (-1 = no prediction)
    mean_ape: dict[float, float]


def recommend_degree(
    cascade: Cascade,
    params: ModelParams,
    grid: Sequence[float],
    reference_size: float,
    times: Sequence[float],
) -> Recommendation:
    """Sweep initial mean degrees, score each by mean APE against a reference
    size, and pick the best (ties to the smaller candidate)."""
    if not grid:
        raise ValueError("grid must be non-empty")
    if reference_size <= 0:
        raise ValueError("reference_size must be positive")
    ape_series: dict[float, tuple[float, ...]] = {}
    mean_ape: dict[float, float] = {}
    for n_init in grid:
        points = enhanced_series(cascade, times, params, n_init=n_init)
        apes = tuple(
            ape(pt.predicted_final, reference_size) if pt.ok else -1.0 for pt in points
        )
        ape_series[n_init] = apes
        defined = [a for a in apes if a >= 0]
        mean_ape[n_init] = float(np.mean(defined)) if defined else float("inf")
    best = min(sorted(grid), key=lambda g: mean_ape[g])
    return Recommendation(best_n_init=float(best), ape_series=ape_series, mean_ape=mean_ape)


# --------------------------------------------------------------------------
# What-if analysis: single-record deletion and successive re-adding
# --------------------------------------------------------------------------


def remove_event(cascade: Cascade, event_id: int) -> Cascade:
    """Counterfactual cascade without one sharing record.

    Children of the removed node are re-parented to its parent: the record
    is removed, not its subtree. The root cannot be removed.
    """
    target = cascade.event(event_id)
    if target.is_root:
        raise ValueError("cannot remove the root")
    events = []
    for e in cascade.events:
        if e.event_id == event_id:
            continue
        if e.parent_id == event_id:
            e = replace(e, parent_id=target.parent_id)
        events.append(e)
    return replace(cascade, events=tuple(events))


def insert_event(cascade: Cascade, event: ShareEvent) -> Cascade:
    """Re-insert a record, preserving (time, id) order."""
    events = sorted(cascade.events + (event,), key=lambda e: (e.time_s, e.event_id))
    return replace(cascade, events=tuple(events))


@dataclass(frozen=True)
class WhatIfEntry:
    """Effect of one sharing record on the adjusted infectiousness and bound.

    Deletion fields answer "what if this record had not happened"; adding
    fields record the state after this record is put back during the
    successive re-adding sweep. A "+" sign means infectiousness increases.
    None marks a counterfactual that leaves too little data to estimate.
    """

    event_id: int
    degree: int
    big_node: bool
    delete_p: Optional[float]
    delete_delta_p: Optional[float]
    delete_bound: Optional[float]
    delete_sign: Optional[str]
    add_p: Optional[float]
    add_bound: Optional[float]
    add_sign: Optional[str]


@dataclass(frozen=True)
class WhatIfReport:
    frame_index: int
    t_eval: float
    n_init: float
    baseline_p: float
    baseline_bound: float
    entries: tuple[WhatIfEntry, ...]


def _sign(delta: float) -> str:
    return "+" if delta > 0 else "-"


def _try_adjusted(cascade: Cascade, t: float, params: ModelParams) -> Optional[float]:
    try:
        return adjusted_infectiousness(cascade, t, params)
    except InsufficientDataError:
        return None


def whatif(
    cascade: Cascade,
    frame_index: int,
    t_eval: float,
    params: ModelParams,
    n_init: Optional[float] = None,
) -> WhatIfReport:
    """Per-record deletion and successive-adding analysis for one timeframe.

    All computation is on copies; the input cascade is never mutated, so the
    baseline is restored exactly once a deleted record is re-added.
    """
    n_init = params.n_star_default if n_init is None else n_init
    frame_events = [
        e
        for e in cascade.reshares
        if e.time_s <= t_eval and _frame_at(e.time_s, params.schedule) == frame_index
    ]
    if not frame_events:
        raise InsufficientDataError(f"frame {frame_index} holds no reshares by t={t_eval}")

    baseline_p = adjusted_infectiousness(cascade, t_eval, params)
    baseline_bound = bound_degree(n_init, baseline_p, params.epsilon_subcritical)

    # Deletion: one record at a time, everything else preserved.
    delete_results: dict[int, tuple[Optional[float], Optional[float], Optional[float], Optional[str]]] = {}
    for e in frame_events:
        p_del = _try_adjusted(remove_event(cascade, e.event_id), t_eval, params)
        if p_del is None:
            delete_results[e.event_id] = (None, None, None, None)
        else:
            delta = p_del - baseline_p
            delete_results[e.event_id] = (
                p_del,
                delta,
                bound_degree(n_init, p_del, params.epsilon_subcritical),
                _sign(delta),
            )

    # Adding: strip the whole frame, then re-insert records in time order.
    stripped = cascade
    for e in frame_events:
        stripped = remove_event(stripped, e.event_id)
    add_results: dict[int, tuple[Optional[float], Optional[float], Optional[str]]] = {}
    prev_p = _try_adjusted(stripped, t_eval, params)
    working = stripped
    for e in sorted(frame_events, key=lambda e: (e.time_s, e.event_id)):
        parent_id = e.parent_id
        if parent_id is not None and parent_id not in working._by_id:
            # Original parent not yet re-added; hang off the root for now.
            # Infectiousness depends only on times and degrees, not links.
            parent_id = working.events[0].event_id
        working = insert_event(working, replace(e, parent_id=parent_id))
        p_add = _try_adjusted(working, t_eval, params)
        if p_add is None:
            add_results[e.event_id] = (None, None, None)
        else:
            sign = "+" if prev_p is None else _sign(p_add - prev_p)
            add_results[e.event_id] = (
                p_add,
                bound_degree(n_init, p_add, params.epsilon_subcritical),
                sign,
            )
            prev_p = p_add

    entries = tuple(
        WhatIfEntry(
            event_id=e.event_id,
            degree=e.degree,
            big_node=e.degree >= params.big_node_threshold,
            delete_p=delete_results[e.event_id][0],
            delete_delta_p=delete_results[e.event_id][1],
            delete_bound=delete_results[e.event_id][2],
            delete_sign=delete_results[e.event_id][3],
            add_p=add_results[e.event_id][0],
            add_bound=add_results[e.event_id][1],
            add_sign=add_results[e.event_id][2],
        )
        for e in frame_events
    )
    return WhatIfReport(
        frame_index=frame_index,
        t_eval=float(t_eval),
        n_init=float(n_init),
        baseline_p=baseline_p,
        baseline_bound=baseline_bound,
        entries=entries,
    )
