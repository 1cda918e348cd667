"""Corpus-level comparison of the baseline and enhanced predictors.

Builds a 200-article corpus mixing the three canonical propagation
patterns (immediate outbreak, rise and recession, wave), then tracks two
things over observation time: how often each model fails to produce a
prediction, and how well each model's ranking covers the true top-20
breakout articles.

Run:  python3 demos/evaluate_models.py   (takes a few seconds)
"""

from sharecast import (
    ModelParams,
    ape_histogram,
    breakout_coverage,
    pattern_mixture,
    predict_series,
    simulate_corpus,
)
from sharecast.evaluation import ape_of_point

params = ModelParams()
corpus = simulate_corpus(200, pattern_mixture(horizon_s=86400.0), seed=202)
truths = {c.article_id: float(c.final_size) for c in corpus if c.final_size}
print(f"{len(corpus)} articles, {len(truths)} with at least one reshare\n")

times = [600.0, 1800.0, 3600.0, 7200.0, 14400.0, 28800.0]

for model in ("seismic", "weseer"):
    apes_by_time = {}
    coverage = []
    for t in times:
        preds = {}
        apes = []
        for c in corpus:
            if c.article_id not in truths:
                continue
            pt = predict_series(c, [t], params, model=model)[0]
            preds[c.article_id] = pt.predicted_final if pt.ok else None
            apes.append(ape_of_point(pt, truths[c.article_id]))
        apes_by_time[t] = apes
        coverage.append(breakout_coverage(preds, truths, 20))

    hist = ape_histogram(apes_by_time)
    print(f"model {model}")
    print(f"  {'t (min)':>8} {'failed':>7} " +
          " ".join(f"{lo:g}-{hi:g}" for lo, hi in zip(hist.bin_edges, hist.bin_edges[1:])))
    for i, t in enumerate(hist.times):
        bins = " ".join(f"{c:>7}" for c in hist.counts[i])
        print(f"  {t/60:>8.0f} {hist.failures[i]:>7} {bins}")
    print("  top-20 coverage: " + ", ".join(
        f"{t/60:.0f}min={c:.2f}" for t, c in zip(times, coverage)))
    print()

print("The failed column shrinks much faster for the bounded model, and its")
print("early-time coverage is consistently higher: with ten minutes of data")
print("it already ranks most of the eventual breakout articles correctly.")
