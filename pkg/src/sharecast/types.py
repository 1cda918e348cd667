"""Core domain types: reshare cascades, timeframe schedules, model parameters.

A cascade is the tree of reshares that grows out of one posted article. The
root node is the article post itself (time 0); every other node is a reshare
whose parent is the share it was seen through. Each node carries a degree:
the number of friends who could see that share.

All types are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

DAY_MINUTES = 1440
WEEK_SECONDS = 7 * 24 * 3600


class OutOfWindowError(ValueError):
    """A timestamp falls outside the observation horizon."""


class InsufficientDataError(Exception):
    """Not enough reshares (or exposure) to estimate infectiousness."""


class Channel(str, enum.Enum):
    """How a share reached its audience."""

    MOMENTS = "moments"
    PRIVATE_CHAT = "private_chat"
    GROUP_CHAT = "group_chat"
    FAVORITES = "favorites"
    OTHER = "other"


@dataclass(frozen=True)
class ShareEvent:
    """One node of the cascade tree.

    ``degree`` is the node's friend count, i.e. the audience size this share
    exposes. ``time_s`` is seconds since the article was posted; the root has
    ``time_s == 0`` and no parent.
    """

    event_id: int
    parent_id: Optional[int]
    user_id: str
    degree: int
    time_s: float
    channel: Channel = Channel.OTHER
    parent_channel: Optional[Channel] = None

    @property
    def is_root(self) -> bool:
        return self.parent_id is None


@dataclass(frozen=True)
class Cascade:
    """A full reshare tree, events sorted by time (root first).

    ``final_size`` is the ground-truth final reshare count when known
    (measured one week after posting by convention); ``None`` otherwise.
    """

    article_id: str
    post_time: float
    events: tuple[ShareEvent, ...]
    final_size: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    @cached_property
    def times(self) -> np.ndarray:
        return np.array([e.time_s for e in self.events], dtype=float)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([e.degree for e in self.events], dtype=float)

    @cached_property
    def _by_id(self) -> dict[int, ShareEvent]:
        return {e.event_id: e for e in self.events}

    def event(self, event_id: int) -> ShareEvent:
        return self._by_id[event_id]

    def reshare_count(self, t_s: float) -> int:
        """R_t: number of non-root shares with time <= t."""
        return sum(1 for e in self.events if not e.is_root and e.time_s <= t_s)

    @property
    def reshares(self) -> tuple[ShareEvent, ...]:
        return tuple(e for e in self.events if not e.is_root)


def validate_cascade(cascade: Cascade) -> list[str]:
    """Check every structural invariant; return violations (empty if valid).

    Violations are data, not faults: each entry names the offending event id
    and the rule it breaks.
    """
    violations: list[str] = []
    seen_ids: set[int] = set()
    events = cascade.events
    if not events:
        return ["empty-cascade: a cascade must contain at least its root"]

    for e in events:
        if e.event_id in seen_ids:
            violations.append(f"duplicate-id: event {e.event_id} appears more than once")
        seen_ids.add(e.event_id)

    roots = [e for e in events if e.is_root]
    if len(roots) != 1:
        violations.append(f"root-count: expected exactly one root, found {len(roots)}")
    for r in roots:
        if r.time_s != 0:
            violations.append(f"root-time: root event {r.event_id} has time {r.time_s} != 0")

    by_id = {}
    for e in events:
        if e.event_id not in by_id:
            by_id[e.event_id] = e

    for e in events:
        if e.time_s < 0:
            violations.append(f"negative-time: event {e.event_id} at {e.time_s}")
        if e.degree < 0:
            violations.append(f"negative-degree: event {e.event_id} degree {e.degree}")
        if e.parent_id is not None:
            parent = by_id.get(e.parent_id)
            if parent is None:
                violations.append(
                    f"missing-parent: event {e.event_id} references unknown parent {e.parent_id}"
                )
            elif parent.time_s > e.time_s:
                violations.append(
                    f"parent-after-child: event {e.event_id} precedes its parent {e.parent_id}"
                )

    for a, b in zip(events, events[1:]):
        if (a.time_s, a.event_id) > (b.time_s, b.event_id):
            violations.append(
                f"unsorted: event {b.event_id} out of (time, id) order after {a.event_id}"
            )
    return violations


def _default_boundaries() -> tuple[int, ...]:
    # Fine bins early, coarse later: 10-min bins to 2 h, 30-min to 8 h,
    # 60-min to 20 h, one final bin to 24 h.
    bounds = list(range(0, 120, 10)) + list(range(120, 480, 30)) + list(range(480, 1200, 60))
    bounds += [1200, 1440]
    return tuple(bounds)


@dataclass(frozen=True)
class TimeframeSchedule:
    """Uneven partition of the observation window into consecutive frames.

    Boundaries are minutes since post, strictly increasing, from 0 to the
    horizon (default one day).
    """

    boundaries_min: tuple[float, ...] = field(default_factory=_default_boundaries)

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries_min)
        object.__setattr__(self, "boundaries_min", b)
        if len(b) < 2:
            raise ValueError("schedule needs at least two boundaries")
        if b[0] != 0:
            raise ValueError("first boundary must be 0")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("boundaries must be strictly increasing")

    @property
    def horizon_min(self) -> float:
        return self.boundaries_min[-1]

    @property
    def horizon_s(self) -> float:
        return self.horizon_min * 60.0

    @property
    def n_frames(self) -> int:
        return len(self.boundaries_min) - 1

    def frame_bounds_s(self, index: int) -> tuple[float, float]:
        return (self.boundaries_min[index] * 60.0, self.boundaries_min[index + 1] * 60.0)


def frame_of(t_s: float, schedule: TimeframeSchedule) -> int:
    """Index k of the frame containing time t (seconds): b[k] <= t/60 < b[k+1]."""
    t_min = t_s / 60.0
    if t_s < 0 or t_min >= schedule.horizon_min:
        raise OutOfWindowError(f"t={t_s}s outside [0, {schedule.horizon_s}s)")
    return bisect.bisect_right(schedule.boundaries_min, t_min) - 1


@dataclass(frozen=True)
class KernelParams:
    """Shape of the reaction-time density: constant level c up to s0 seconds,
    then a power-law tail with exponent 1 + theta."""

    c: float
    s0: float
    theta: float
    normalized: bool = False

    def __post_init__(self):
        if self.c <= 0 or self.s0 <= 0 or self.theta <= 0:
            raise ValueError("kernel parameters must be positive")
        if self.normalized:
            total = self.c * self.s0 * (1.0 + 1.0 / self.theta)
            if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
                raise ValueError(f"normalized kernel has total mass {total}, expected 1")


def default_kernel() -> KernelParams:
    """Normalized kernel with a 5-minute constant window and heavy tail."""
    from .kernel import normalize  # deferred: kernel.py imports this module

    return normalize(KernelParams(c=1.0, s0=300.0, theta=0.242))


@dataclass(frozen=True)
class ModelParams:
    """Everything the predictors need besides the cascade itself.

    ``correction`` is an optional multiplier on the estimated infectiousness
    as a function of time (identity by default); kept as a hook because the
    tweet-trained schedules do not transfer to this setting.
    """

    kernel: KernelParams = field(default_factory=default_kernel)
    schedule: TimeframeSchedule = field(default_factory=TimeframeSchedule)
    n_star_default: float = 140.0
    epsilon_subcritical: float = 0.01
    min_reshares: int = 1
    big_node_threshold: int = 1000
    correction: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.n_star_default <= 0:
            raise ValueError("n_star_default must be positive")
        if not 0 < self.epsilon_subcritical < 1:
            raise ValueError("epsilon_subcritical must lie in (0, 1)")
        if self.min_reshares < 1:
            raise ValueError("min_reshares must be >= 1")

    def alpha(self, t_s: float) -> float:
        return 1.0 if self.correction is None else self.correction(t_s)


def with_kernel(params: ModelParams, kernel: KernelParams) -> ModelParams:
    return replace(params, kernel=kernel)
