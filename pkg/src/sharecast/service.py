"""HTTP/JSON API serving predictions, what-if reports, propagation summaries,
mean-degree recommendations and exploration history to the UI.

The corpus is loaded immutably at startup; every endpoint is a pure read of
library computations (the service adds no arithmetic of its own), so
identical requests return identical bodies. "Not enough data" is a typed
422 payload, never a 500.
"""

from __future__ import annotations

import math
from typing import Mapping, Optional, Sequence

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import enhanced
from .baseline import PredictionPoint, infectiousness_series
from .evaluation import APE_FAILED, ape
from .io import HistoryStore, UserRecord
from .types import Cascade, InsufficientDataError, ModelParams, OutOfWindowError


class WhatIfRequest(BaseModel):
    frame: int
    t: float
    n_init: Optional[float] = None


class HistoryAppendRequest(BaseModel):
    n_init: float
    ape_series: list[float] = []
    timestamp: Optional[float] = None


def _clean(x: Optional[float]) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def _point_json(pt: PredictionPoint) -> dict:
    return {
        "time_s": pt.time_s,
        "status": pt.status,
        "predicted_final": _clean(pt.predicted_final),
        "n_star_used": pt.n_star_used,
        "model_tag": pt.model_tag,
        "p_used": _clean(pt.p_used),
    }


def create_app(
    corpus: Sequence[Cascade],
    params: Optional[ModelParams] = None,
    users: Optional[Mapping[str, UserRecord]] = None,
    history: Optional[HistoryStore] = None,
) -> FastAPI:
    params = params or ModelParams()
    users = users or {}
    history = history or HistoryStore()
    articles = {c.article_id: c for c in corpus}

    app = FastAPI(title="sharecast", docs_url=None, redoc_url=None)

    @app.exception_handler(InsufficientDataError)
    async def _insufficient(request: Request, exc: InsufficientDataError):
        return JSONResponse(status_code=422, content={"error": "insufficient_data", "detail": str(exc)})

    @app.exception_handler(OutOfWindowError)
    async def _out_of_window(request: Request, exc: OutOfWindowError):
        return JSONResponse(status_code=400, content={"error": "out_of_window", "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "bad_request", "detail": str(exc)})

    def get_article(article_id: str) -> Cascade:
        cascade = articles.get(article_id)
        if cascade is None:
            raise KeyError(article_id)
        return cascade

    @app.exception_handler(KeyError)
    async def _not_found(request: Request, exc: KeyError):
        return JSONResponse(status_code=404, content={"error": "unknown_article", "detail": str(exc)})

    @app.get("/articles")
    def list_articles():
        horizon = params.schedule.horizon_s
        return [
            {
                "id": c.article_id,
                "post_time": c.post_time,
                "observed_size": c.reshare_count(horizon),
                "final_size": c.final_size,
            }
            for c in sorted(corpus, key=lambda c: c.article_id)
        ]

    def _parse_times(times: Optional[str]) -> tuple[float, ...]:
        if not times:
            return enhanced.default_times(params)
        try:
            return tuple(float(x) for x in times.split(","))
        except ValueError:
            raise ValueError(f"malformed times list {times!r}") from None

    @app.get("/articles/{article_id}/prediction")
    def prediction(
        article_id: str,
        model: str = Query("weseer"),
        n_init: Optional[float] = Query(None),
        times: Optional[str] = Query(None),
    ):
        cascade = get_article(article_id)
        eval_times = _parse_times(times)
        points = enhanced.predict_series(cascade, eval_times, params, model=model, n_init=n_init)
        series = infectiousness_series(cascade, eval_times, params)
        one_day = cascade.reshare_count(params.schedule.horizon_s)
        final = cascade.final_size
        ape_rows = []
        for pt in points:
            a1 = a2 = APE_FAILED
            if pt.ok:
                a1 = ape(pt.predicted_final, one_day) if one_day > 0 else APE_FAILED
                a2 = ape(pt.predicted_final, final) if final else APE_FAILED
            diff = a1 - a2 if (a1 >= 0 and a2 >= 0) else 0.0
            ape_rows.append({"time_s": pt.time_s, "ape1": a1, "ape2": a2, "diff": diff})
        adj = [
            _clean(enhanced_try(cascade, t)) for t in eval_times
        ]
        return {
            "article_id": article_id,
            "model": model,
            "series": {
                "times": list(series.times),
                "r": list(series.r),
                "n": list(series.n),
                "n_eff": list(series.n_eff),
                "p": [_clean(x) for x in series.p],
                "p_adj": adj,
                "lambda": [_clean(x) for x in series.lam],
            },
            "points": [_point_json(pt) for pt in points],
            "ape": ape_rows,
        }

    def enhanced_try(cascade: Cascade, t: float) -> Optional[float]:
        try:
            return enhanced.adjusted_infectiousness(cascade, t, params)
        except InsufficientDataError:
            return None

    @app.post("/articles/{article_id}/whatif")
    def whatif(article_id: str, req: WhatIfRequest):
        cascade = get_article(article_id)
        report = enhanced.whatif(cascade, req.frame, req.t, params, n_init=req.n_init)
        return {
            "article_id": article_id,
            "frame_index": report.frame_index,
            "t_eval": report.t_eval,
            "n_init": report.n_init,
            "baseline_p": report.baseline_p,
            "baseline_bound": report.baseline_bound,
            "entries": [
                {
                    "event_id": e.event_id,
                    "degree": e.degree,
                    "big_node": e.big_node,
                    "delete_p": e.delete_p,
                    "delete_delta_p": e.delete_delta_p,
                    "delete_bound": e.delete_bound,
                    "delete_sign": e.delete_sign,
                    "add_p": e.add_p,
                    "add_bound": e.add_bound,
                    "add_sign": e.add_sign,
                }
                for e in report.entries
            ],
        }

    @app.get("/articles/{article_id}/propagation")
    def propagation(article_id: str, frame: int = Query(...)):
        cascade = get_article(article_id)
        if not 0 <= frame < params.schedule.n_frames:
            raise ValueError(f"frame {frame} out of range")
        lo, hi = params.schedule.frame_bounds_s(frame)
        nodes = [e for e in cascade.reshares if lo <= e.time_s < hi]

        channel_counts: dict[str, int] = {}
        for e in nodes:
            channel_counts[e.channel.value] = channel_counts.get(e.channel.value, 0) + 1

        big = [e for e in nodes if e.degree >= params.big_node_threshold]
        small = [e for e in nodes if e.degree < params.big_node_threshold]

        links = []
        for e in nodes:
            parent = cascade.event(e.parent_id)
            if parent.is_root:
                parent_frame = None
            else:
                parent_frame = enhanced._frame_at(parent.time_s, params.schedule)
            links.append(
                {
                    "child": e.event_id,
                    "parent": e.parent_id,
                    "parent_frame": parent_frame,
                    "from_previous_frame": parent_frame is not None and parent_frame < frame,
                }
            )

        ages: dict[str, int] = {}
        genders: dict[str, int] = {}
        regions: dict[str, int] = {}
        for e in nodes:
            u = users.get(e.user_id)
            if u is None:
                continue
            if u.age is not None:
                band = f"{(u.age // 10) * 10}-{(u.age // 10) * 10 + 9}"
                ages[band] = ages.get(band, 0) + 1
            genders[u.gender] = genders.get(u.gender, 0) + 1
            if u.region:
                regions[u.region] = regions.get(u.region, 0) + 1

        def node_json(e):
            return {"event_id": e.event_id, "user_id": e.user_id, "degree": e.degree,
                    "time_s": e.time_s, "channel": e.channel.value}

        return {
            "article_id": article_id,
            "frame": frame,
            "frame_bounds_s": [lo, hi],
            "channel_counts": dict(sorted(channel_counts.items())),
            "big_nodes": [node_json(e) for e in big],
            "small_nodes": [node_json(e) for e in small],
            "links": links,
            "portrait": {
                "age_bands": dict(sorted(ages.items())),
                "genders": dict(sorted(genders.items())),
                "regions": dict(sorted(regions.items())),
            },
        }

    @app.get("/articles/{article_id}/recommendation")
    def recommendation(article_id: str, grid: Optional[str] = Query(None)):
        cascade = get_article(article_id)
        candidates = (
            tuple(float(x) for x in grid.split(",")) if grid else enhanced.DEFAULT_DEGREE_GRID
        )
        horizon = params.schedule.horizon_s
        reference = cascade.final_size or cascade.reshare_count(horizon)
        if not reference:
            raise InsufficientDataError("article has no reshares to score against")
        times = enhanced.default_times(params)
        rec = enhanced.recommend_degree(cascade, params, candidates, reference, times)
        return {
            "article_id": article_id,
            "best_n_init": rec.best_n_init,
            "reference_size": reference,
            "times": list(times),
            "candidates": [
                {
                    "n_init": g,
                    "mean_ape": rec.mean_ape[g] if math.isfinite(rec.mean_ape[g]) else None,
                    "ape_series": list(rec.ape_series[g]),
                }
                for g in candidates
            ],
        }

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        return {
            "session_id": session_id,
            "entries": [
                {"n_init": e.n_init, "timestamp": e.timestamp, "ape_series": list(e.ape_series)}
                for e in history.list(session_id)
            ],
        }

    @app.post("/sessions/{session_id}/history")
    def post_history(session_id: str, req: HistoryAppendRequest):
        entry = history.append(session_id, req.n_init, req.ape_series, timestamp=req.timestamp)
        return {"n_init": entry.n_init, "timestamp": entry.timestamp, "ape_series": list(entry.ape_series)}

    return app
