"""Command-line entry points: simulate, predict, whatif, evaluate, serve.

Exit codes: 0 success, 2 usage error, 3 data error. Every command is
reproducible given identical inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import enhanced, io as cio
from .simulate import pattern_mixture, simulate_corpus
from .evaluation import APE_FAILED, ape_histogram, ape_of_point, breakout_coverage
from .types import InsufficientDataError, ModelParams

USAGE_ERROR = 2
DATA_ERROR = 3


class DataError(Exception):
    pass


def _load_params(config: Optional[str]) -> ModelParams:
    if config is None:
        return ModelParams()
    try:
        return cio.load_config(config)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load config {config}: {exc}") from exc


def _load_corpus(path: str):
    try:
        return cio.load_corpus(path)
    except (OSError, cio.ParseError) as exc:
        raise DataError(f"cannot load corpus {path}: {exc}") from exc


def _find_article(corpus, article_id: str):
    for c in corpus:
        if c.article_id == article_id:
            return c
    raise DataError(f"unknown article {article_id!r}")


def _times(args, params: ModelParams) -> tuple[float, ...]:
    if args.times:
        return tuple(float(x) for x in args.times.split(","))
    return enhanced.default_times(params)


def cmd_simulate(args) -> int:
    params = _load_params(args.config)
    mixture = pattern_mixture(kernel=params.kernel, horizon_s=params.schedule.horizon_s)
    corpus = simulate_corpus(args.n, mixture, seed=args.seed)
    cio.save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} cascades to {args.out}")
    return 0


def cmd_predict(args) -> int:
    params = _load_params(args.config)
    corpus = _load_corpus(args.corpus)
    cascade = _find_article(corpus, args.article_id)
    times = _times(args, params)
    points = enhanced.predict_series(cascade, times, params, model=args.model, n_init=args.n_init)
    truth = cascade.final_size
    print(f"article {cascade.article_id}  model={args.model}  truth={truth}")
    print(f"{'time_s':>10}  {'r_t':>6}  {'status':>18}  {'predicted':>12}  {'n_star':>10}  {'APE':>8}")
    for pt in points:
        pred = f"{pt.predicted_final:.2f}" if pt.ok else "-"
        a = ape_of_point(pt, truth) if truth else None
        ape_str = f"{a:.3f}" if a is not None and a >= 0 else ("-1" if a is not None else "-")
        print(f"{pt.time_s:>10.0f}  {cascade.reshare_count(pt.time_s):>6}  {pt.status:>18}  "
              f"{pred:>12}  {pt.n_star_used:>10.2f}  {ape_str:>8}")
    return 0


def cmd_whatif(args) -> int:
    params = _load_params(args.config)
    corpus = _load_corpus(args.corpus)
    cascade = _find_article(corpus, args.article_id)
    try:
        report = enhanced.whatif(cascade, args.frame, args.t, params, n_init=args.n_init)
    except InsufficientDataError as exc:
        raise DataError(str(exc)) from exc
    print(f"article {cascade.article_id}  frame={report.frame_index}  t={report.t_eval:.0f}s  "
          f"baseline p'={report.baseline_p:.6g}  bound={report.baseline_bound:.4g}")
    print(f"{'event':>6}  {'degree':>7}  {'big':>4}  {'del p':>12}  {'del sign':>8}  {'add p':>12}  {'add sign':>8}")
    for e in report.entries:
        del_p = f"{e.delete_p:.6g}" if e.delete_p is not None else "-"
        add_p = f"{e.add_p:.6g}" if e.add_p is not None else "-"
        print(f"{e.event_id:>6}  {e.degree:>7}  {'Y' if e.big_node else 'n':>4}  "
              f"{del_p:>12}  {e.delete_sign or '-':>8}  {add_p:>12}  {e.add_sign or '-':>8}")
    return 0


def cmd_evaluate(args) -> int:
    params = _load_params(args.config)
    corpus = _load_corpus(args.corpus)
    truths = {c.article_id: float(c.final_size) for c in corpus if c.final_size}
    if args.top_m > len(truths):
        print(f"--top-m {args.top_m} exceeds corpus size {len(truths)}", file=sys.stderr)
        return USAGE_ERROR
    times = _times(args, params)
    models = args.models.split(",")
    report: dict = {"times": list(times), "models": {}}
    for model in models:
        if model not in enhanced.MODEL_TAGS:
            print(f"unknown model {model!r}", file=sys.stderr)
            return USAGE_ERROR
        apes_by_time: dict[float, list[float]] = {t: [] for t in times}
        coverage = []
        for t in times:
            preds: dict[str, Optional[float]] = {}
            for c in sorted(corpus, key=lambda c: c.article_id):
                if c.article_id not in truths:
                    continue
                pt = enhanced.predict_series(c, [t], params, model=model, n_init=args.n_init)[0]
                preds[c.article_id] = pt.predicted_final if pt.ok else None
                apes_by_time[t].append(ape_of_point(pt, truths[c.article_id]))
            coverage.append(breakout_coverage(preds, truths, args.top_m))
        hist = ape_histogram(apes_by_time)
        report["models"][model] = {
            "ape_histogram": hist.rows(),
            "coverage_top_m": {"m": args.top_m, "values": coverage},
        }
        print(f"model {model}: failures per time "
              f"{[row['failed'] for row in hist.rows()]}")
        print(f"model {model}: top-{args.top_m} coverage {[round(c, 3) for c in coverage]}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
        print(f"report written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    params = _load_params(args.config)
    corpus = _load_corpus(args.corpus)
    users = cio.load_users(args.users) if args.users else None
    host, _, port = args.addr.rpartition(":")
    app = create_app(corpus, params, users=users)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharecast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (flags override)")

    p = sub.add_parser("simulate", help="generate a synthetic corpus")
    common(p)
    p.add_argument("--n", type=int, default=200, help="number of cascades")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output corpus path (JSONL)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="prediction series for one article")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--article-id", required=True)
    p.add_argument("--model", choices=enhanced.MODEL_TAGS, default="weseer")
    p.add_argument("--n-init", type=float, default=None)
    p.add_argument("--times", help="comma-separated evaluation times in seconds")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("whatif", help="per-record deletion/adding analysis")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--article-id", required=True)
    p.add_argument("--frame", type=int, required=True)
    p.add_argument("--t", type=float, required=True, help="evaluation time in seconds")
    p.add_argument("--n-init", type=float, default=None)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("evaluate", help="corpus-level APE and coverage report")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", default="seismic,weseer", help="comma-separated model tags")
    p.add_argument("--top-m", type=int, default=20)
    p.add_argument("--n-init", type=float, default=None)
    p.add_argument("--times", help="comma-separated evaluation times in seconds")
    p.add_argument("--out", help="write machine-readable JSON report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP API")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--users", help="user property table (JSONL)")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
