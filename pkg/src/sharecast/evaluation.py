"""Prediction quality metrics and the corpus-level evaluation harness.

The failure sentinel -1 marks articles for which a model produced no
prediction (too little data, or supercritical regime); it is binned
separately and never enters averages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Optional, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .baseline import PredictionPoint

#: Sentinel APE for "no prediction".
APE_FAILED = -1.0

#: Default APE bin edges; with the failure bin this yields six categories.
DEFAULT_APE_BINS = (0.0, 0.25, 0.5, 1.0, 2.0, float("inf"))


def ape(predicted: float, truth: float) -> float:
    """Absolute percentage error |predicted - truth| / truth; truth must be > 0."""
    if truth <= 0:
        raise ValueError("truth must be positive")
    return abs(predicted - truth) / truth


def ape_of_point(point: "PredictionPoint", truth: float) -> float:
    """APE for a prediction outcome; failures map to the -1 sentinel."""
    if not point.ok:
        return APE_FAILED
    return ape(point.predicted_final, truth)


def ape_pair(predicted: Optional[float], one_day_size: float, final_size: float) -> tuple[float, float, float]:
    """(APE vs one-day size, APE vs final size, their difference).

    A difference near zero means the propagation mostly happened on the
    first day. ``predicted=None`` propagates the failure sentinel.
    """
    if one_day_size <= 0 or final_size <= 0:
        raise ValueError("reference sizes must be positive")
    if predicted is None:
        return (APE_FAILED, APE_FAILED, 0.0)
    a1 = ape(predicted, one_day_size)
    a2 = ape(predicted, final_size)
    return (a1, a2, a1 - a2)


def breakout_coverage(
    predictions: Mapping[str, Optional[float]],
    truths: Mapping[str, float],
    m: int,
) -> float:
    """Overlap fraction between predicted and true top-M article lists.

    Unpredicted articles (None) rank last; rank ties break by article id so
    coverage numbers are reproducible.
    """
    if m <= 0 or m > len(truths):
        raise ValueError("need 0 < M <= corpus size")

    def top(scores: Mapping[str, Optional[float]]) -> set[str]:
        ranked = sorted(
            scores.items(),
            key=lambda kv: (-(kv[1] if kv[1] is not None else -np.inf), kv[0]),
        )
        return {aid for aid, _ in ranked[:m]}

    true_top = top(truths)
    pred_top = top({aid: predictions.get(aid) for aid in truths})
    return len(true_top & pred_top) / m


def median_accuracy(predictions: Sequence[Optional[float]], truths: Sequence[float]) -> float:
    """Fraction of articles classified on the correct side of the median
    true size. Unpredicted articles count as wrong."""
    if len(predictions) != len(truths) or len(truths) < 2:
        raise ValueError("need equal-length lists with at least two articles")
    med = float(np.median(np.asarray(truths, dtype=float)))
    hits = 0
    for pred, truth in zip(predictions, truths):
        if pred is None:
            continue
        if (pred >= med) == (truth >= med):
            hits += 1
    return hits / len(truths)


@dataclass(frozen=True)
class ApeHistogram:
    """Counts of articles per APE bin at each evaluation time.

    ``counts[i][j]`` is the number of articles at ``times[i]`` in bin j of
    ``bin_edges`` (half-open [lo, hi), last bin open-ended); ``failures[i]``
    counts the sentinel bin.
    """

    times: tuple[float, ...]
    bin_edges: tuple[float, ...]
    counts: tuple[tuple[int, ...], ...]
    failures: tuple[int, ...]

    def rows(self) -> list[dict]:
        out = []
        for i, t in enumerate(self.times):
            row = {"time_s": t, "failed": self.failures[i]}
            for j in range(len(self.bin_edges) - 1):
                label = f"[{self.bin_edges[j]:g},{self.bin_edges[j+1]:g})"
                row[label] = self.counts[i][j]
            out.append(row)
        return out


def ape_histogram(
    apes_by_time: Mapping[float, Sequence[float]],
    bin_edges: Sequence[float] = DEFAULT_APE_BINS,
) -> ApeHistogram:
    """Bin per-article APEs (sentinels included) per evaluation time."""
    edges = tuple(bin_edges)
    times = tuple(sorted(apes_by_time))
    counts = []
    failures = []
    for t in times:
        vals = np.asarray(apes_by_time[t], dtype=float)
        failed = int(np.sum(vals < 0))
        ok = vals[vals >= 0]
        row = []
        for lo, hi in zip(edges, edges[1:]):
            row.append(int(np.sum((ok >= lo) & (ok < hi))))
        counts.append(tuple(row))
        failures.append(failed)
    return ApeHistogram(times=times, bin_edges=edges, counts=tuple(counts), failures=tuple(failures))
