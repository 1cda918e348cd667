import json
import random

import pytest

from sharecast import (
    Cascade,
    HistoryStore,
    KernelParams,
    ModelParams,
    ParseError,
    ShareEvent,
    TimeframeSchedule,
    UserRecord,
    load_config,
    load_corpus,
    load_shares,
    load_users,
    pattern_mixture,
    save_config,
    save_corpus,
    simulate_corpus,
    validate_cascade,
)


def write_jsonl(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")


def share_row(article="a1", from_uid="pub", to_uid="u1", ts=1000, post=1000,
              from_type="moments", to_type="moments"):
    return {
        "article_id": article,
        "from_uid": from_uid,
        "to_uid": to_uid,
        "from_type": from_type,
        "to_type": to_type,
        "share_ts": ts,
        "post_time": post,
    }


class TestLoadShares:
    def test_chain_reconstruction(self, tmp_path):
        rows = [
            share_row(to_uid="u1", ts=1100),
            share_row(from_uid="u1", to_uid="u2", ts=1300, to_type="group_chat"),
            share_row(from_uid="u2", to_uid="u3", ts=1700),
        ]
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, rows)
        degrees = {"u1": 50, "u2": 20, "u3": 8}
        (cascade,) = load_shares(path, degrees)
        assert cascade.article_id == "a1"
        assert cascade.post_time == 1000.0
        assert len(cascade.events) == 4  # synthetic root + three shares
        assert validate_cascade(cascade) == []
        root, e1, e2, e3 = cascade.events
        assert root.user_id == "publisher:a1"
        assert e1.parent_id == 0 and e1.time_s == 100.0 and e1.degree == 50
        assert e2.parent_id == 1 and e2.channel.value == "group_chat"
        assert e3.parent_id == 2

    def test_row_order_does_not_matter(self, tmp_path):
        rows = [
            share_row(to_uid="u1", ts=1100),
            share_row(from_uid="u1", to_uid="u2", ts=1300),
            share_row(from_uid="u2", to_uid="u3", ts=1700),
            share_row(article="a2", to_uid="u9", ts=2000, post=1500),
        ]
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        write_jsonl(a, rows)
        shuffled = rows[:]
        random.Random(3).shuffle(shuffled)
        write_jsonl(b, shuffled)
        assert load_shares(a) == load_shares(b)

    def test_unknown_parent_attaches_to_root(self, tmp_path):
        rows = [share_row(from_uid="ghost", to_uid="u1", ts=1100)]
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, rows)
        (cascade,) = load_shares(path)
        assert cascade.events[1].parent_id == 0

    def test_unknown_degree_defaults_to_zero(self, tmp_path):
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, [share_row(ts=1100)])
        (cascade,) = load_shares(path, degrees={})
        assert cascade.events[1].degree == 0

    def test_share_before_post_rejected(self, tmp_path):
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, [share_row(ts=900, post=1000)])
        with pytest.raises(ParseError) as exc:
            load_shares(path)
        assert exc.value.line_no == 1

    def test_missing_field_rejected(self, tmp_path):
        row = share_row()
        del row["to_uid"]
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, [row])
        with pytest.raises(ParseError):
            load_shares(path)

    def test_bad_json_rejected_with_line_number(self, tmp_path):
        path = tmp_path / "shares.jsonl"
        path.write_text(json.dumps(share_row(ts=1100)) + "\n{not json\n", encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            load_shares(path)
        assert exc.value.line_no == 2

    def test_unknown_channel_rejected(self, tmp_path):
        path = tmp_path / "shares.jsonl"
        write_jsonl(path, [share_row(ts=1100, to_type="telepathy")])
        with pytest.raises(ParseError):
            load_shares(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "shares.jsonl"
        path.write_text("\n" + json.dumps(share_row(ts=1100)) + "\n\n", encoding="utf-8")
        (cascade,) = load_shares(path)
        assert len(cascade.events) == 2


class TestLoadUsers:
    def test_roundtrip_fields(self, tmp_path):
        path = tmp_path / "users.jsonl"
        write_jsonl(
            path,
            [
                {"user_id": "u1", "gender": "f", "age": 34, "region": "north", "friend_count": 250},
                {"user_id": "u2"},
            ],
        )
        users = load_users(path)
        assert users["u1"] == UserRecord("u1", "f", 34, "north", 250)
        assert users["u2"] == UserRecord("u2", "unknown", None, None, 0)

    def test_missing_user_id_rejected(self, tmp_path):
        path = tmp_path / "users.jsonl"
        write_jsonl(path, [{"gender": "m"}])
        with pytest.raises(ParseError):
            load_users(path)

    def test_bad_gender_rejected(self):
        with pytest.raises(ValueError):
            UserRecord("u1", gender="x")


class TestCorpusRoundTrip:
    def test_identity(self, tmp_path):
        corpus = simulate_corpus(6, pattern_mixture(horizon_s=1800.0), seed=4)
        path = tmp_path / "corpus.jsonl"
        save_corpus(corpus, path)
        assert load_corpus(path) == corpus

    def test_bytes_stable(self, tmp_path):
        corpus = simulate_corpus(3, pattern_mixture(horizon_s=1800.0), seed=4)
        p1, p2 = tmp_path / "c1.jsonl", tmp_path / "c2.jsonl"
        save_corpus(corpus, p1)
        save_corpus(load_corpus(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_invalid_cascade_rejected_on_load(self, tmp_path):
        bad = {
            "article_id": "x",
            "post_time": 0.0,
            "final_size": 1,
            "events": [
                {"event_id": 0, "parent_id": None, "user_id": "r", "degree": 5,
                 "time_s": 0.0, "channel": "other"},
                {"event_id": 1, "parent_id": 99, "user_id": "a", "degree": 5,
                 "time_s": 10.0, "channel": "moments"},
            ],
        }
        path = tmp_path / "corpus.jsonl"
        write_jsonl(path, [bad])
        with pytest.raises(ParseError):
            load_corpus(path)


class TestConfigRoundTrip:
    def test_identity(self, tmp_path):
        params = ModelParams(
            kernel=KernelParams(c=0.002, s0=450.0, theta=0.6),
            schedule=TimeframeSchedule(boundaries_min=(0.0, 15.0, 60.0)),
            n_star_default=90.0,
            epsilon_subcritical=0.02,
            min_reshares=3,
            big_node_threshold=500,
        )
        path = tmp_path / "config.json"
        save_config(params, path)
        assert load_config(path) == params

    def test_partial_config_uses_defaults(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"n_star_default": 77}), encoding="utf-8")
        params = load_config(path)
        assert params.n_star_default == 77
        assert params.min_reshares == ModelParams().min_reshares


class TestHistoryStore:
    def test_append_only_ordering(self):
        store = HistoryStore()
        store.append("s1", 45.0, [0.2, 0.1], timestamp=1.0)
        store.append("s1", 100.0, [0.3], timestamp=2.0)
        entries = store.list("s1")
        assert [e.n_init for e in entries] == [45.0, 100.0]
        assert entries[0].ape_series == (0.2, 0.1)

    def test_sessions_isolated(self):
        store = HistoryStore()
        store.append("s1", 45.0, timestamp=1.0)
        assert store.list("s2") == []

    def test_file_mirror_survives_restart(self, tmp_path):
        store = HistoryStore(root=tmp_path)
        store.append("s1", 45.0, [0.5], timestamp=1.0)
        reloaded = HistoryStore(root=tmp_path)
        assert reloaded.list("s1") == store.list("s1")
