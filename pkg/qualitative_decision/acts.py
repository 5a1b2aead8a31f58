import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from qualitative_decision.capacity import Capacity, full_mask, random_monotone_capacity
from qualitative_decision.exceptions import FrameError
from qualitative_decision.scale import LevelLike, Scale, _rank_on

logger = logging.getLogger(__name__)

# An act is the sequence of outcome indices it yields, one per state.
Act = Tuple[int, ...]

WORST = 'worst'
BEST = 'best'


@dataclass(frozen=True)
class DecisionFrame:
    """States, outcomes, the utility mu: X -> L and (optionally) a capacity on 2^S."""

    state_count: int
    scale: Scale
    mu: Tuple[int, ...]
    capacity: Optional[Capacity] = None
    state_labels: Tuple[str, ...] = field(default=())
    outcome_labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.state_count, int) or self.state_count < 1:
            raise FrameError(f"state count must be a positive integer, got {self.state_count!r}")
        if not self.mu:
            raise FrameError("a frame needs at least one outcome")
        try:
            mu = tuple(self.scale.check(level) for level in self.mu)
        except Exception as e:
            raise FrameError(f"utility out of range: {e}")
        object.__setattr__(self, 'mu', mu)
        if self.scale.bottom not in mu or self.scale.top not in mu:
            raise FrameError(
                f"utility image {sorted(set(mu))} must contain both {self.scale.bottom} and {self.scale.top}; "
                f"use DecisionFrame.with_extremes to add x^* / x_*")
        if self.capacity is not None:
            if self.capacity.state_count != self.state_count:
                raise FrameError(
                    f"capacity is over {self.capacity.state_count} states, frame has {self.state_count}")
            if self.capacity.scale != self.scale:
                raise FrameError("capacity and utility live on different scales")
        if not self.state_labels:
            object.__setattr__(self, 'state_labels', tuple(f"s{i}" for i in range(self.state_count)))
        if not self.outcome_labels:
            object.__setattr__(self, 'outcome_labels', tuple(f"x{i}" for i in range(len(mu))))
        if len(self.state_labels) != self.state_count or len(set(self.state_labels)) != self.state_count:
            raise FrameError("state labels must be distinct, one per state")
        if len(self.outcome_labels) != len(mu) or len(set(self.outcome_labels)) != len(mu):
            raise FrameError("outcome labels must be distinct, one per outcome")

    @property
    def outcome_count(self) -> int:
        return len(self.mu)

    @property
    def act_count(self) -> int:
        return self.outcome_count ** self.state_count

    @property
    def full_event(self) -> int:
        return full_mask(self.state_count)

    @property
    def best_outcome(self) -> int:
        """Least-index outcome at the top of the scale (x^*)."""
        return self.mu.index(self.scale.top)

    @property
    def worst_outcome(self) -> int:
        """Least-index outcome at the bottom of the scale (x_*)."""
        return self.mu.index(self.scale.bottom)

    def require_capacity(self) -> Capacity:
        if self.capacity is None:
            raise FrameError("this frame carries no capacity")
        return self.capacity

    def check_act(self, act: Sequence[int]) -> Act:
        if len(act) != self.state_count:
            raise FrameError(f"act {tuple(act)} has {len(act)} entries, frame has {self.state_count} states")
        for x in act:
            self.check_outcome(x)
        return tuple(int(x) for x in act)

    def check_outcome(self, x: int) -> int:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < self.outcome_count:
            raise FrameError(f"outcome {x!r} is not an outcome index of this frame")
        return int(x)

    def check_event(self, event: int) -> int:
        if isinstance(event, bool) or not isinstance(event, (int, np.integer)) or not 0 <= event <= self.full_event:
            raise FrameError(f"event {event!r} is not a subset index over {self.state_count} states")
        return int(event)

    def with_capacity(self, capacity: Optional[Capacity]) -> 'DecisionFrame':
        return DecisionFrame(self.state_count, self.scale, self.mu, capacity,
                             self.state_labels, self.outcome_labels)

    @classmethod
    def with_extremes(cls, state_count: int, scale: Scale, mu: Sequence[int],
                      capacity: Optional[Capacity] = None,
                      state_labels: Sequence[str] = (),
                      outcome_labels: Sequence[str] = ()) -> 'DecisionFrame':
        """Build a frame, appending an ideal x^* and/or a worst x_* outcome if mu misses them."""
        mu = [scale.check(level) for level in mu]
        labels = list(outcome_labels) or [f"x{i}" for i in range(len(mu))]
        if scale.top not in mu:
            mu.append(scale.top)
            labels.append('x^*')
        if scale.bottom not in mu:
            mu.append(scale.bottom)
            labels.append('x_*')
        return cls(state_count, scale, tuple(mu), capacity, tuple(state_labels), tuple(labels))

    @classmethod
    def random(cls, state_count: int, outcome_count: int, scale: Scale, seed: int) -> 'DecisionFrame':
        """Seeded frame: outcome 0 is x_*, outcome 1 is x^*, the rest uniform on the scale."""
        if outcome_count < 2:
            raise FrameError("a random frame needs at least two outcomes")
        rng = np.random.default_rng(seed)
        extra = [int(v) for v in rng.integers(0, scale.size, size=outcome_count - 2)]
        capacity = random_monotone_capacity(state_count, scale, seed)
        return cls(state_count, scale, tuple([scale.bottom, scale.top] + extra), capacity)


class ActSpace:
    """X^S enumerated lexicographically: state 0 is the most significant digit."""

    def __init__(self, state_count: int, outcome_count: int):
        self.state_count = state_count
        self.outcome_count = outcome_count
        self.size = outcome_count ** state_count
        self.weights = np.array([outcome_count ** (state_count - 1 - s) for s in range(state_count)],
                                dtype=np.int64)
        self.array = np.array(list(itertools.product(range(outcome_count), repeat=state_count)),
                              dtype=np.int64).reshape(self.size, state_count)
        self.array.flags.writeable = False
        self.constants = np.array([self.index((x,) * state_count) for x in range(outcome_count)],
                                  dtype=np.int64)

    def index(self, act: Sequence[int]) -> int:
        return int(sum(int(x) * int(w) for x, w in zip(act, self.weights)))

    def act(self, index: int) -> Act:
        return tuple(int(x) for x in self.array[index])

    def part(self, event: int) -> np.ndarray:
        """Contribution of the states in ``event`` to each act's index."""
        inside = np.array([event >> s & 1 for s in range(self.state_count)], dtype=np.int64)
        return self.array @ (self.weights * inside)

    def compound_table(self, event: int) -> np.ndarray:
        """table[f, g] = index of f A g."""
        full = full_mask(self.state_count)
        return self.part(event)[:, None] + self.part(full & ~event)[None, :]

    def lattice_table(self, key: Sequence[int], mode: str,
                      right: Optional[np.ndarray] = None) -> np.ndarray:
        """table[f, j] = index of f meet g_j (mode 'worst') or f join g_j (mode 'best') under ``key``.

        ``right`` restricts the second argument to the given act indices
        (all acts by default).
        """
        right = np.arange(self.size) if right is None else np.asarray(right, dtype=np.int64)
        levels = np.asarray(key, dtype=np.int64)[self.array]
        left_levels, right_levels = levels[:, None, :], levels[right][None, :, :]
        if mode == WORST:
            keep_f = left_levels <= right_levels
        elif mode == BEST:
            keep_f = left_levels >= right_levels
        else:
            raise FrameError(f"unknown combination mode {mode!r}")
        chosen = np.where(keep_f, self.array[:, None, :], self.array[right][None, :, :])
        return chosen @ self.weights

    def comonotonic_table(self, key: Sequence[int]) -> np.ndarray:
        levels = np.asarray(key, dtype=np.int64)[self.array]
        diff = np.sign(levels[:, :, None] - levels[:, None, :])
        rises = diff > 0
        falls = diff < 0
        table = np.empty((self.size, self.size), dtype=bool)
        for f in range(self.size):
            table[f] = ~np.any(rises[f][None, :, :] & falls, axis=(1, 2))
        return table


@lru_cache(maxsize=32)
def act_space(state_count: int, outcome_count: int) -> ActSpace:
    return ActSpace(state_count, outcome_count)


def frame_act_space(frame: DecisionFrame) -> ActSpace:
    return act_space(frame.state_count, frame.outcome_count)


def constant_act(frame: DecisionFrame, x: int) -> Act:
    return (frame.check_outcome(x),) * frame.state_count


def compound_act(frame: DecisionFrame, f: Sequence[int], event: int, g: Sequence[int]) -> Act:
    """fAg: f on the event, g off it."""
    f = frame.check_act(f)
    g = frame.check_act(g)
    event = frame.check_event(event)
    return tuple(f[s] if event >> s & 1 else g[s] for s in range(frame.state_count))


def binary_act(frame: DecisionFrame, x: int, event: int, y: int) -> Act:
    """xAy: outcome x on the event, y on its complement."""
    return compound_act(frame, constant_act(frame, x), event, constant_act(frame, y))


def pointwise_combine(frame: DecisionFrame, f: Sequence[int], g: Sequence[int], mode: str) -> Act:
    """Statewise worst (meet) or best (join) outcome by mu; ties keep f's outcome."""
    f = frame.check_act(f)
    g = frame.check_act(g)
    mu = frame.mu
    if mode == WORST:
        return tuple(a if mu[a] <= mu[b] else b for a, b in zip(f, g))
    if mode == BEST:
        return tuple(a if mu[a] >= mu[b] else b for a, b in zip(f, g))
    raise FrameError(f"unknown combination mode {mode!r}")


def pointwise_leq(frame: DecisionFrame, f: Sequence[int], g: Sequence[int]) -> bool:
    f = frame.check_act(f)
    g = frame.check_act(g)
    return all(frame.mu[a] <= frame.mu[b] for a, b in zip(f, g))


def is_comonotonic(frame: DecisionFrame, f: Sequence[int], g: Sequence[int]) -> bool:
    f = frame.check_act(f)
    g = frame.check_act(g)
    mu = frame.mu
    for s in range(frame.state_count):
        for t in range(frame.state_count):
            if mu[f[s]] > mu[f[t]] and mu[g[s]] < mu[g[t]]:
                return False
    return True


def level_set(frame: DecisionFrame, f: Sequence[int], level: LevelLike) -> int:
    """F_lambda = {s : mu(f(s)) >= lambda}, as a subset index."""
    f = frame.check_act(f)
    rank = _rank_on(frame.scale, level)
    mask = 0
    for s, x in enumerate(f):
        if frame.mu[x] >= rank:
            mask |= 1 << s
    return mask


def decompose_act(frame: DecisionFrame, f: Sequence[int]) -> List[Act]:
    """The binary acts x F_x x_* over every outcome x; their pointwise join rebuilds f up to mu."""
    f = frame.check_act(f)
    worst = frame.worst_outcome
    parts = []
    for x in range(frame.outcome_count):
        event = level_set(frame, f, frame.mu[x])
        parts.append(binary_act(frame, x, event, worst))
    return parts


def join_all(frame: DecisionFrame, acts: Sequence[Sequence[int]]) -> Act:
    result = frame.check_act(acts[0])
    for act in acts[1:]:
        result = pointwise_combine(frame, result, act, BEST)
    return result
