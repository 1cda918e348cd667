import json

import pytest

from sharecast import load_corpus, pattern_mixture, save_config, save_corpus, simulate_corpus
from sharecast.cli import DATA_ERROR, USAGE_ERROR, main
from sharecast.types import ModelParams


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "corpus.jsonl"
    corpus = simulate_corpus(8, pattern_mixture(horizon_s=3600.0), seed=7)
    save_corpus(corpus, path)
    return path


class TestSimulate:
    def test_writes_corpus(self, tmp_path):
        out = tmp_path / "sim.jsonl"
        assert main(["simulate", "--n", "5", "--seed", "3", "--out", str(out)]) == 0
        assert len(load_corpus(out)) == 5

    def test_deterministic_across_runs(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        main(["simulate", "--n", "4", "--seed", "9", "--out", str(a)])
        main(["simulate", "--n", "4", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_config_flag(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        save_config(ModelParams(n_star_default=80.0), cfg)
        out = tmp_path / "sim.jsonl"
        assert main(["simulate", "--n", "2", "--out", str(out), "--config", str(cfg)]) == 0


class TestPredict:
    def test_runs_and_prints_table(self, corpus_path, capsys):
        aid = load_corpus(corpus_path)[0].article_id
        rc = main(
            ["predict", "--corpus", str(corpus_path), "--article-id", aid,
             "--model", "weseer", "--times", "600,1800,3600"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert aid in out
        assert "600" in out and "3600" in out

    def test_all_model_tags_accepted(self, corpus_path):
        aid = load_corpus(corpus_path)[0].article_id
        for model in ("seismic", "speed-only", "weseer"):
            assert main(
                ["predict", "--corpus", str(corpus_path), "--article-id", aid,
                 "--model", model, "--times", "1200"]
            ) == 0

    def test_unknown_model_is_usage_error(self, corpus_path):
        assert main(
            ["predict", "--corpus", str(corpus_path), "--article-id", "a0000",
             "--model", "nope"]
        ) == USAGE_ERROR

    def test_unknown_article_is_data_error(self, corpus_path):
        assert main(
            ["predict", "--corpus", str(corpus_path), "--article-id", "missing"]
        ) == DATA_ERROR

    def test_missing_corpus_is_data_error(self, tmp_path):
        assert main(
            ["predict", "--corpus", str(tmp_path / "nope.jsonl"), "--article-id", "x"]
        ) == DATA_ERROR


class TestWhatIf:
    def test_runs(self, corpus_path, capsys):
        corpus = load_corpus(corpus_path)
        aid = max(corpus, key=lambda c: c.reshare_count(600.0)).article_id
        rc = main(
            ["whatif", "--corpus", str(corpus_path), "--article-id", aid,
             "--frame", "0", "--t", "600"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "baseline p'" in out

    def test_empty_frame_is_data_error(self, tmp_path):
        from sharecast import Cascade, ShareEvent

        quiet = Cascade("quiet", 0.0, (ShareEvent(0, None, "r", 5, 0.0),), final_size=0)
        path = tmp_path / "quiet.jsonl"
        save_corpus([quiet], path)
        rc = main(
            ["whatif", "--corpus", str(path), "--article-id", "quiet",
             "--frame", "0", "--t", "600"]
        )
        assert rc == DATA_ERROR


class TestEvaluate:
    def test_report_written(self, corpus_path, tmp_path):
        out = tmp_path / "report.json"
        rc = main(
            ["evaluate", "--corpus", str(corpus_path), "--models", "seismic,weseer",
             "--top-m", "3", "--times", "1200,3600", "--out", str(out)]
        )
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["times"] == [1200.0, 3600.0]
        assert set(report["models"]) == {"seismic", "weseer"}
        for model in report["models"].values():
            assert len(model["coverage_top_m"]["values"]) == 2
            assert len(model["ape_histogram"]) == 2

    def test_deterministic_report(self, corpus_path, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["evaluate", "--corpus", str(corpus_path), "--times", "1800", "--top-m", "2"]
        main(argv + ["--out", str(a)])
        main(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_top_m_exceeding_corpus_is_usage_error(self, corpus_path):
        assert main(
            ["evaluate", "--corpus", str(corpus_path), "--top-m", "9999", "--times", "600"]
        ) == USAGE_ERROR

    def test_unknown_model_is_usage_error(self, corpus_path):
        assert main(
            ["evaluate", "--corpus", str(corpus_path), "--models", "bogus", "--times", "600"]
        ) == USAGE_ERROR


class TestUsage:
    def test_no_command_is_usage_error(self):
        assert main([]) == USAGE_ERROR

    def test_unknown_command_is_usage_error(self):
        assert main(["frobnicate"]) == USAGE_ERROR

    def test_missing_required_flag_is_usage_error(self):
        assert main(["predict", "--article-id", "x"]) == USAGE_ERROR
