import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from qualitative_decision.config import Settings, enforce_budget
from qualitative_decision.exceptions import CapacityError, DistributionError
from qualitative_decision.scale import Level, LevelLike, Scale, _rank_on

logger = logging.getLogger(__name__)

# Dense 2^|S| tables
MAX_STATES = 20


def full_mask(state_count: int) -> int:
    return (1 << state_count) - 1


def state_mask(states: Iterable[int]) -> int:
    mask = 0
    for s in states:
        mask |= 1 << s
    return mask


def mask_states(mask: int, state_count: int) -> Tuple[int, ...]:
    return tuple(s for s in range(state_count) if mask >> s & 1)


@lru_cache(maxsize=None)
def subsets_by_cardinality(state_count: int) -> Tuple[int, ...]:
    """Every subset index, ordered by (cardinality, index)."""
    return tuple(sorted(range(1 << state_count), key=lambda m: (bin(m).count('1'), m)))


def _check_state_count(state_count: int):
    if not isinstance(state_count, int) or state_count < 1:
        raise CapacityError(f"state count must be a positive integer, got {state_count!r}")
    if state_count > MAX_STATES:
        raise CapacityError(f"state count {state_count} exceeds the capacity limit of {MAX_STATES}")


@dataclass(frozen=True)
class Capacity:
    """Monotone set function on 2^S, stored as a dense table indexed by subset mask.

    Build instances through validate_capacity (or the possibility/necessity
    constructors); the dataclass itself does not re-check monotonicity.
    """

    state_count: int
    scale: Scale
    table: Tuple[int, ...]

    def value(self, mask: int) -> int:
        return self.table[mask]

    def __call__(self, mask: int) -> int:
        return self.table[mask]

    def level(self, mask: int) -> Level:
        return Level(self.table[mask], self.scale)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def with_value(self, mask: int, level: LevelLike) -> 'Capacity':
        table = list(self.table)
        table[mask] = _rank_on(self.scale, level)
        return validate_capacity(table, self.state_count, self.scale)


@dataclass(frozen=True)
class CapacityClassification:
    maxitive: bool
    minitive: bool
    maxitive_witness: Optional[Tuple[int, int]] = None
    minitive_witness: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class PossibilityDistribution:
    scale: Scale
    values: Tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise DistributionError("a possibility distribution needs at least one state")
        try:
            ranks = tuple(self.scale.check(v) for v in self.values)
        except Exception as e:
            raise DistributionError(f"invalid possibility degree: {e}")
        object.__setattr__(self, 'values', ranks)

    @property
    def state_count(self) -> int:
        return len(self.values)

    @property
    def normalized(self) -> bool:
        return max(self.values) == self.scale.top

    def require_normalized(self):
        if not self.normalized:
            raise DistributionError(
                f"possibility distribution {self.values} is not normalized (max must be {self.scale.top})")


TableLike = Union[Sequence[int], Mapping[int, int]]


def validate_capacity(table: TableLike, state_count: int, scale: Scale) -> Capacity:
    """Validate a table over all 2^state_count subsets and return a Capacity.

    Monotonicity is checked on cover pairs (A minus one state, A); the first
    failure in subset-index order is reported as the witness.
    """
    _check_state_count(state_count)
    count = 1 << state_count
    if isinstance(table, Mapping):
        missing = [mask for mask in range(count) if mask not in table]
        if missing:
            raise CapacityError(f"capacity table has no entry for subset {missing[0]}")
        extra = [mask for mask in table if not 0 <= mask < count]
        if extra:
            raise CapacityError(f"capacity table has an entry for unknown subset {extra[0]}")
        values = [table[mask] for mask in range(count)]
    else:
        values = list(table)
        if len(values) != count:
            raise CapacityError(
                f"capacity table has {len(values)} entries, expected {count} for {state_count} states")
    try:
        ranks = tuple(scale.check(v) for v in values)
    except Exception as e:
        raise CapacityError(f"capacity value out of range: {e}")

    for mask in range(1, count):
        for s in range(state_count):
            if mask >> s & 1:
                cover = mask & ~(1 << s)
                if ranks[cover] > ranks[mask]:
                    raise CapacityError(
                        f"monotonicity violated: sigma({cover}) = {ranks[cover]} > sigma({mask}) = {ranks[mask]}",
                        witness=(cover, mask))
    if ranks[0] != scale.bottom:
        raise CapacityError(f"sigma(empty set) must be {scale.bottom}, got {ranks[0]}", witness=(0,))
    if ranks[count - 1] != scale.top:
        raise CapacityError(f"sigma(S) must be {scale.top}, got {ranks[count - 1]}", witness=(count - 1,))
    return Capacity(state_count, scale, ranks)


def _check_distribution(pi: PossibilityDistribution):
    if not isinstance(pi, PossibilityDistribution):
        raise DistributionError(f"expected a PossibilityDistribution, got {type(pi).__name__}")
    _check_state_count(pi.state_count)
    pi.require_normalized()


def _possibility_table(pi: PossibilityDistribution) -> List[int]:
    n = pi.state_count
    table = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        table[mask] = max(table[mask & (mask - 1)], pi.values[low])
    return table


def possibility_capacity(pi: PossibilityDistribution) -> Capacity:
    """Pi(A) = max of pi over A, Pi(empty) = bottom."""
    _check_distribution(pi)
    return validate_capacity(_possibility_table(pi), pi.state_count, pi.scale)


def necessity_capacity(pi: PossibilityDistribution) -> Capacity:
    """N(A) = n(Pi(complement of A))."""
    _check_distribution(pi)
    possibility = _possibility_table(pi)
    full = full_mask(pi.state_count)
    top = pi.scale.top
    table = [top - possibility[full & ~mask] for mask in range(1 << pi.state_count)]
    return validate_capacity(table, pi.state_count, pi.scale)


def conjugate_capacity(capacity: Capacity) -> Capacity:
    """sigma^c(A) = n(sigma(complement of A)); possibility and necessity are conjugates."""
    full = full_mask(capacity.state_count)
    top = capacity.scale.top
    table = [top - capacity.table[full & ~mask] for mask in range(1 << capacity.state_count)]
    return validate_capacity(table, capacity.state_count, capacity.scale)


def _first_failure(table: np.ndarray, combine, pick) -> Optional[Tuple[int, int]]:
    indices = np.arange(len(table))
    for a in range(len(table)):
        combined = combine(a, indices)
        bad = table[combined] != pick(table[a], table)
        if bad.any():
            return (a, int(np.argmax(bad)))
    return None


def classify_capacity(capacity: Capacity) -> CapacityClassification:
    """Exhaustive maxitivity / minitivity check with the first violating pair of each."""
    table = capacity.as_array()
    max_witness = _first_failure(table, lambda a, b: a | b, np.maximum)
    min_witness = _first_failure(table, lambda a, b: a & b, np.minimum)
    return CapacityClassification(
        maxitive=max_witness is None,
        minitive=min_witness is None,
        maxitive_witness=max_witness,
        minitive_witness=min_witness,
    )


def random_monotone_capacity(state_count: int, scale: Scale, seed: int) -> Capacity:
    """Seeded random capacity.

    Subsets are visited by increasing cardinality and each value is drawn
    uniformly between the largest value of its covers and the top.
    """
    _check_state_count(state_count)
    rng = np.random.default_rng(seed)
    full = full_mask(state_count)
    table = [0] * (1 << state_count)
    for mask in subsets_by_cardinality(state_count):
        if mask == 0:
            continue
        if mask == full:
            table[mask] = scale.top
            continue
        floor = max(table[mask & ~(1 << s)] for s in range(state_count) if mask >> s & 1)
        table[mask] = int(rng.integers(floor, scale.top + 1))
    return validate_capacity(table, state_count, scale)


def likelihood_from_capacity(capacity: Capacity, settings: Optional[Settings] = None) -> np.ndarray:
    """Boolean matrix leq[A, B] = sigma(A) <= sigma(B)."""
    table = capacity.as_array()
    enforce_budget("event likelihood", len(table) ** 2, settings)
    return table[:, None] <= table[None, :]
