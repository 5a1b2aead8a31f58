import logging
import operator
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Union

from qualitative_decision.exceptions import ScaleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scale:
    """Finite chain of levels 0..m; rank order is the scale order."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 2:
            raise ScaleError(f"a scale needs at least two levels, got {self.size!r}")

    @property
    def top(self) -> int:
        return self.size - 1

    @property
    def bottom(self) -> int:
        return 0

    def check(self, rank: int) -> int:
        if isinstance(rank, bool):
            raise ScaleError(f"rank {rank!r} is not a level of a {self.size}-level scale")
        try:
            value = operator.index(rank)
        except TypeError:
            raise ScaleError(f"rank {rank!r} is not an integer")
        if not 0 <= value < self.size:
            raise ScaleError(f"rank {rank!r} is not a level of a {self.size}-level scale")
        return value

    def level(self, rank: int) -> 'Level':
        return Level(self.check(rank), self)

    def levels(self) -> List['Level']:
        return [Level(rank, self) for rank in range(self.size)]

    def reverse_rank(self, rank: int) -> int:
        return self.top - self.check(rank)


@dataclass(frozen=True, eq=False)
class Level:
    """A rank bound to its scale. Compares with plain integer ranks too."""

    rank: int
    scale: Scale

    def __post_init__(self):
        object.__setattr__(self, 'rank', self.scale.check(self.rank))

    def _other_rank(self, other):
        if isinstance(other, Level):
            if other.scale != self.scale:
                raise ScaleError(f"cannot compare levels of scales {self.scale.size} and {other.scale.size}")
            return other.rank
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Level) and other.scale != self.scale:
            return False
        rank = self._other_rank(other)
        return rank if rank is NotImplemented else self.rank == rank

    def __lt__(self, other):
        rank = self._other_rank(other)
        return rank if rank is NotImplemented else self.rank < rank

    def __le__(self, other):
        rank = self._other_rank(other)
        return rank if rank is NotImplemented else self.rank <= rank

    def __gt__(self, other):
        rank = self._other_rank(other)
        return rank if rank is NotImplemented else self.rank > rank

    def __ge__(self, other):
        rank = self._other_rank(other)
        return rank if rank is NotImplemented else self.rank >= rank

    def __hash__(self):
        return hash(self.rank)

    def __int__(self):
        return self.rank

    def __index__(self):
        return self.rank

    def __repr__(self):
        return f"Level({self.rank}/{self.scale.top})"


LevelLike = Union[Level, int]


def _rank_on(scale: Scale, level: LevelLike) -> int:
    if isinstance(level, Level):
        if level.scale != scale:
            raise ScaleError(f"level {level!r} does not belong to a {scale.size}-level scale")
        return level.rank
    return scale.check(level)


def order_reverse(scale: Scale, level: LevelLike) -> Level:
    """The order-reversing involution n of the scale (rank complement m - i)."""
    return Level(scale.top - _rank_on(scale, level), scale)


def median(levels: Iterable[Level]) -> Level:
    """Middle element of an odd-size multiset of levels (multiplicity respected)."""
    items: Sequence[Level] = list(levels)
    if not items:
        raise ScaleError("median of an empty collection")
    if len(items) % 2 == 0:
        raise ScaleError(f"median needs an odd number of levels, got {len(items)}")
    scale = items[0].scale
    for item in items:
        if not isinstance(item, Level):
            raise ScaleError(f"median expects levels, got {item!r}")
        if item.scale != scale:
            raise ScaleError("median over levels of different scales")
    ranks = sorted(item.rank for item in items)
    return Level(ranks[len(ranks) // 2], scale)
