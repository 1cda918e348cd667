"""File formats: sharing histories, user tables, corpora, configs, history.

All record files are UTF-8, one JSON object per line (streamable). The
sharing table carries, per share: article_id, from_uid, to_uid, from_type,
to_type, share_ts, post_time (epoch seconds). The reading-activity table
uses the same columns with read_ts in place of share_ts; it is documented
for completeness but no model here consumes it.

Corpus persistence is lossless: load(save(corpus)) reproduces the corpus
exactly, independent of input row order.
"""

from __future__ import annotations

import json
import logging
import threading
import time as _time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .types import (
    Cascade,
    Channel,
    KernelParams,
    ModelParams,
    ShareEvent,
    TimeframeSchedule,
    validate_cascade,
)

log = logging.getLogger(__name__)

PathLike = Union[str, Path]

SHARE_FIELDS = ("article_id", "from_uid", "to_uid", "from_type", "to_type", "share_ts", "post_time")


class ParseError(ValueError):
    """Malformed record; carries the 1-based line number."""

    def __init__(self, path: PathLike, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.line_no = line_no


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    gender: str = "unknown"  # m / f / unknown
    age: Optional[int] = None
    region: Optional[str] = None
    friend_count: int = 0

    def __post_init__(self):
        if self.friend_count < 0:
            raise ValueError("friend_count must be >= 0")
        if self.gender not in ("m", "f", "unknown"):
            raise ValueError(f"unknown gender code {self.gender!r}")


def _parse_channel(value, path, line_no) -> Channel:
    try:
        return Channel(value)
    except ValueError:
        raise ParseError(path, line_no, f"unknown channel {value!r}") from None


def load_shares(path: PathLike, degrees: Optional[Mapping[str, int]] = None) -> list[Cascade]:
    """Read a sharing table into cascades, one per article.

    Each share links to the nearest earlier share by its parent user within
    the same article; shares whose parent user never appears attach to the
    root (with a warning). Degrees join from ``degrees`` (user -> friend
    count); unknown users default to 0 with a warning.
    """
    degrees = degrees or {}
    rows_by_article: dict[str, list[dict]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from None
            missing = [f for f in SHARE_FIELDS if f not in row]
            if missing:
                raise ParseError(path, line_no, f"missing fields {missing}")
            if row["share_ts"] < row["post_time"]:
                raise ParseError(path, line_no, "share_ts precedes post_time")
            row["_line"] = line_no
            rows_by_article.setdefault(str(row["article_id"]), []).append(row)

    warned_users: set[str] = set()

    def degree_of(uid: str) -> int:
        if uid in degrees:
            return int(degrees[uid])
        if uid not in warned_users:
            warned_users.add(uid)
            log.warning("no degree for user %s; defaulting to 0", uid)
        return 0

    cascades = []
    for article_id in sorted(rows_by_article):
        rows = sorted(rows_by_article[article_id], key=lambda r: (r["share_ts"], r["to_uid"]))
        post_time = rows[0]["post_time"]
        root_uid = f"publisher:{article_id}"
        events = [
            ShareEvent(
                event_id=0,
                parent_id=None,
                user_id=root_uid,
                degree=degree_of(root_uid) if root_uid in degrees else 0,
                time_s=0.0,
                channel=Channel.OTHER,
            )
        ]
        last_event_by_user: dict[str, int] = {}
        for i, row in enumerate(rows, start=1):
            parent_uid = str(row["from_uid"])
            parent_id = last_event_by_user.get(parent_uid, 0)
            if parent_uid not in last_event_by_user:
                log.warning(
                    "article %s line %d: parent user %s has no earlier share; attaching to root",
                    article_id, row["_line"], parent_uid,
                )
            ev = ShareEvent(
                event_id=i,
                parent_id=parent_id,
                user_id=str(row["to_uid"]),
                degree=degree_of(str(row["to_uid"])),
                time_s=float(row["share_ts"] - post_time),
                channel=_parse_channel(row["to_type"], path, row["_line"]),
                parent_channel=_parse_channel(row["from_type"], path, row["_line"]),
            )
            events.append(ev)
            last_event_by_user[str(row["to_uid"])] = i
        cascades.append(Cascade(article_id=article_id, post_time=float(post_time), events=tuple(events)))
    return cascades


def load_users(path: PathLike) -> dict[str, UserRecord]:
    """Read the user property table (one JSON object per line)."""
    users: dict[str, UserRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from None
            if "user_id" not in row:
                raise ParseError(path, line_no, "missing user_id")
            age = row.get("age")
            users[str(row["user_id"])] = UserRecord(
                user_id=str(row["user_id"]),
                gender=row.get("gender", "unknown"),
                age=None if age in (None, "") else int(age),
                region=row.get("region") or None,
                friend_count=int(row.get("friend_count", 0)),
            )
    return users


# --------------------------------------------------------------------------
# Corpus persistence (canonical, lossless)
# --------------------------------------------------------------------------


def _event_to_json(e: ShareEvent) -> dict:
    out = {
        "event_id": e.event_id,
        "parent_id": e.parent_id,
        "user_id": e.user_id,
        "degree": e.degree,
        "time_s": e.time_s,
        "channel": e.channel.value,
    }
    if e.parent_channel is not None:
        out["parent_channel"] = e.parent_channel.value
    return out


def _event_from_json(d: dict) -> ShareEvent:
    pc = d.get("parent_channel")
    return ShareEvent(
        event_id=int(d["event_id"]),
        parent_id=None if d["parent_id"] is None else int(d["parent_id"]),
        user_id=str(d["user_id"]),
        degree=int(d["degree"]),
        time_s=float(d["time_s"]),
        channel=Channel(d["channel"]),
        parent_channel=None if pc is None else Channel(pc),
    )


def save_corpus(corpus: Iterable[Cascade], path: PathLike) -> None:
    """One cascade per line, events in canonical (time, id) order."""
    with open(path, "w", encoding="utf-8") as fh:
        for cascade in corpus:
            record = {
                "article_id": cascade.article_id,
                "post_time": cascade.post_time,
                "final_size": cascade.final_size,
                "events": [_event_to_json(e) for e in cascade.events],
            }
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_corpus(path: PathLike) -> list[Cascade]:
    corpus = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from None
            cascade = Cascade(
                article_id=str(record["article_id"]),
                post_time=float(record["post_time"]),
                events=tuple(_event_from_json(d) for d in record["events"]),
                final_size=record.get("final_size"),
            )
            violations = validate_cascade(cascade)
            if violations:
                raise ParseError(path, line_no, f"invalid cascade: {violations[0]}")
            corpus.append(cascade)
    return corpus


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


def save_config(params: ModelParams, path: PathLike, extra: Optional[dict] = None) -> None:
    record = {
        "kernel": {
            "c": params.kernel.c,
            "s0": params.kernel.s0,
            "theta": params.kernel.theta,
            "normalized": params.kernel.normalized,
        },
        "schedule_boundaries_min": list(params.schedule.boundaries_min),
        "n_star_default": params.n_star_default,
        "epsilon_subcritical": params.epsilon_subcritical,
        "min_reshares": params.min_reshares,
        "big_node_threshold": params.big_node_threshold,
    }
    record.update(extra or {})
    Path(path).write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")


def load_config(path: PathLike) -> ModelParams:
    record = json.loads(Path(path).read_text(encoding="utf-8"))
    kwargs = {}
    if "kernel" in record:
        kwargs["kernel"] = KernelParams(**record["kernel"])
    if "schedule_boundaries_min" in record:
        kwargs["schedule"] = TimeframeSchedule(tuple(record["schedule_boundaries_min"]))
    for key in ("n_star_default", "epsilon_subcritical", "min_reshares", "big_node_threshold"):
        if key in record:
            kwargs[key] = record[key]
    return ModelParams(**kwargs)


# --------------------------------------------------------------------------
# Exploration history (append-only, per session)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HistoryEntry:
    n_init: float
    timestamp: float
    ape_series: tuple[float, ...] = ()


class HistoryStore:
    """Append-only exploration history, single writer per session.

    Backed by memory; optionally mirrored to a JSONL file per session under
    ``root`` so sessions survive restarts.
    """

    def __init__(self, root: Optional[PathLike] = None):
        self._root = Path(root) if root is not None else None
        self._entries: dict[str, list[HistoryEntry]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._master = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._master:
            return self._locks.setdefault(session_id, threading.Lock())

    def append(self, session_id: str, n_init: float, ape_series: Sequence[float] = (),
               timestamp: Optional[float] = None) -> HistoryEntry:
        entry = HistoryEntry(
            n_init=float(n_init),
            timestamp=_time.time() if timestamp is None else float(timestamp),
            ape_series=tuple(float(a) for a in ape_series),
        )
        with self._lock(session_id):
            self._entries.setdefault(session_id, []).append(entry)
            if self._root is not None:
                self._root.mkdir(parents=True, exist_ok=True)
                with open(self._root / f"{session_id}.jsonl", "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(asdict(entry)) + "\n")
        return entry

    def list(self, session_id: str) -> list[HistoryEntry]:
        with self._lock(session_id):
            entries = self._entries.get(session_id)
            if entries is None and self._root is not None:
                path = self._root / f"{session_id}.jsonl"
                entries = []
                if path.exists():
                    for line in path.read_text(encoding="utf-8").splitlines():
                        d = json.loads(line)
                        entries.append(HistoryEntry(d["n_init"], d["timestamp"], tuple(d["ape_series"])))
                self._entries[session_id] = entries
            return list(entries or [])
