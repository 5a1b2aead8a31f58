"""Preference relations over acts and exhaustive checks of the axioms on them.

A relation is stored as a rank per act (lower rank = less preferred), so it
is a complete preorder by construction. Every axiom is checked over its
whole quantifier space; the reported witness is the least violating tuple in
lexicographic order of the witness fields as listed in ``AXIOM_FIELDS``
(acts by index, outcomes by index, events by subset index).
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, reduce
from operator import mul
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qualitative_decision.acts import BEST, WORST, Act, ActSpace, DecisionFrame, frame_act_space
from qualitative_decision.config import Settings, enforce_budget, get_settings
from qualitative_decision.exceptions import QDTError, RelationError

logger = logging.getLogger(__name__)


class AxiomId(Enum):
    SAV1 = 'Sav 1'
    SAV2 = 'Sav 2'
    SAV3 = 'Sav 3'
    SAV4 = 'Sav 4'
    SAV4P = "Sav 4'"
    SAV5 = 'Sav 5'
    WS3 = 'WS 3'
    RCD = 'RCD'
    RDD = 'RDD'
    CD = 'CD'
    DD = 'DD'
    COD = 'CoD'
    OPTIMISM = 'Optimism'
    PESSIMISM = 'Pessimism'

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> 'AxiomId':
        if not isinstance(text, str):
            raise QDTError(f"unknown axiom {text!r}")
        cleaned = text.strip()
        for axiom in cls:
            if cleaned.upper() == axiom.name or cleaned.lower() == axiom.value.lower():
                return axiom
        raise QDTError(f"unknown axiom {text!r}")


# Quantified variables of each axiom, in witness order
AXIOM_FIELDS: Dict[AxiomId, Tuple[str, ...]] = {
    AxiomId.SAV1: (),
    AxiomId.SAV2: ('f', 'g', 'h', 'h_prime', 'A'),
    AxiomId.SAV3: ('x', 'y', 'h', 'A'),
    AxiomId.SAV4: ('x', 'x_prime', 'y', 'y_prime', 'A', 'B'),
    AxiomId.SAV4P: ('x', 'x_prime', 'y', 'y_prime', 'A', 'B'),
    AxiomId.SAV5: (),
    AxiomId.WS3: ('x', 'y', 'h', 'B'),
    AxiomId.RCD: ('f', 'g', 'y'),
    AxiomId.RDD: ('f', 'g', 'y'),
    AxiomId.CD: ('f', 'g', 'h'),
    AxiomId.DD: ('f', 'g', 'h'),
    AxiomId.COD: ('f', 'g'),
    AxiomId.OPTIMISM: ('f', 'g', 'A'),
    AxiomId.PESSIMISM: ('f', 'g', 'A'),
}

ACT_FIELDS = {'f', 'g', 'h', 'h_prime'}
OUTCOME_FIELDS = {'x', 'x_prime', 'y', 'y_prime'}

# Axioms whose quantifiers range over the whole act space
FULL_SPACE_AXIOMS = set(AxiomId) - {AxiomId.SAV1, AxiomId.SAV5}


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    holds: bool
    witness: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a verdict carries a witness exactly when the property fails")


@dataclass(frozen=True, eq=False)
class PreferenceRelation:
    """Complete preorder on acts given by ranks.

    ``acts`` lists the declared act indices (lexicographic X^S order);
    ``None`` means the full act space, in which case ``ranks[i]`` is the rank
    of act i.
    """

    frame: DecisionFrame
    ranks: np.ndarray
    acts: Optional[Tuple[int, ...]] = None

    @property
    def space(self) -> ActSpace:
        return frame_act_space(self.frame)

    @property
    def is_full(self) -> bool:
        return self.acts is None

    @cached_property
    def _positions(self) -> Dict[int, int]:
        if self.acts is None:
            return {}
        return {act: i for i, act in enumerate(self.acts)}

    def full_ranks(self) -> np.ndarray:
        if self.acts is not None:
            raise RelationError(
                f"this check quantifies over all {self.frame.act_count} acts; the relation declares {len(self.acts)}")
        return self.ranks

    def rank_of(self, act_index: int) -> int:
        if self.acts is None:
            return int(self.ranks[act_index])
        if act_index not in self._positions:
            raise RelationError(f"act {self.space.act(act_index)} is not ranked by this relation")
        return int(self.ranks[self._positions[act_index]])

    def rank_of_act(self, act: Sequence[int]) -> int:
        return self.rank_of(self.space.index(self.frame.check_act(act)))

    def weakly_prefers(self, f: Sequence[int], g: Sequence[int]) -> bool:
        """f is at most as good as g."""
        return self.rank_of_act(f) <= self.rank_of_act(g)

    @cached_property
    def outcome_key(self) -> np.ndarray:
        return np.asarray(induced_outcome_order(self), dtype=np.int64)


def relation_from_ranks(frame: DecisionFrame, ranks: Sequence[int],
                        acts: Optional[Sequence[int]] = None) -> PreferenceRelation:
    ranks = np.asarray(ranks, dtype=np.int64)
    if ranks.ndim != 1:
        raise RelationError("ranks must be a flat sequence")
    if acts is None:
        if len(ranks) != frame.act_count:
            raise RelationError(f"{len(ranks)} ranks for an act space of {frame.act_count} acts")
    else:
        acts = tuple(int(a) for a in acts)
        if len(acts) != len(ranks):
            raise RelationError(f"{len(ranks)} ranks for {len(acts)} declared acts")
        if len(set(acts)) != len(acts):
            raise RelationError("an act is ranked more than once")
        if any(not 0 <= a < frame.act_count for a in acts):
            raise RelationError("declared act index outside the act space")
        if len(acts) == frame.act_count:
            order = np.argsort(np.asarray(acts))
            ranks, acts = ranks[order], None
    if np.any(ranks < 0):
        raise RelationError("ranks must be non-negative")
    ranks = ranks.copy()
    ranks.flags.writeable = False
    return PreferenceRelation(frame, ranks, acts)


def check_pairwise_preorder(weakly_prefers: np.ndarray) -> AxiomVerdict:
    """Sav 1 on pairwise data: complete and transitive, else a pair or a 3-cycle witness."""
    w = np.asarray(weakly_prefers, dtype=bool)
    incomparable = np.argwhere(~(w | w.T))
    if len(incomparable):
        i, j = incomparable[0]
        return AxiomVerdict(AxiomId.SAV1.label, False, {'incomparable': (int(i), int(j))})
    for i in range(len(w)):
        broken = w[i][:, None] & w & ~w[i][None, :]
        hits = np.argwhere(broken)
        if len(hits):
            j, k = hits[0]
            return AxiomVerdict(AxiomId.SAV1.label, False, {'intransitive': (int(i), int(j), int(k))})
    return AxiomVerdict(AxiomId.SAV1.label, True)


def relation_from_pairwise(frame: DecisionFrame, acts: Sequence[Sequence[int]],
                           weakly_prefers: np.ndarray) -> PreferenceRelation:
    """Compress pairwise data (``weakly_prefers[i, j]``: act i is at most as good as act j) to ranks."""
    verdict = check_pairwise_preorder(weakly_prefers)
    if not verdict.holds:
        raise RelationError("pairwise preferences are not a complete preorder", verdict)
    w = np.asarray(weakly_prefers, dtype=bool)
    below = w.sum(axis=0)
    ranks = np.unique(below, return_inverse=True)[1]
    space = frame_act_space(frame)
    indices = [space.index(frame.check_act(act)) for act in acts]
    return relation_from_ranks(frame, ranks, indices)


def dense_ranks(values: Sequence[int]) -> np.ndarray:
    return np.unique(np.asarray(values), return_inverse=True)[1].astype(np.int64).reshape(-1)


def coarsen_relation(rel: PreferenceRelation, boundary: int) -> PreferenceRelation:
    """Merge indifference class ``boundary`` with the class just above it."""
    dense = dense_ranks(rel.ranks)
    merged = dense - (dense > boundary)
    return PreferenceRelation(rel.frame, _frozen(merged), rel.acts)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.asarray(array, dtype=np.int64).copy()
    array.flags.writeable = False
    return array


def induced_outcome_order(rel: PreferenceRelation) -> Tuple[int, ...]:
    """x <=_P y iff the constant act x is at most as good as the constant act y (dense ranks)."""
    space = rel.space
    try:
        constant_ranks = [rel.rank_of(int(c)) for c in space.constants]
    except RelationError:
        raise RelationError("the induced order on outcomes needs every constant act to be ranked")
    return tuple(int(v) for v in dense_ranks(constant_ranks))


# ---------------------------------------------------------------------------
# Scanning drivers

def _first_hit(violations: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(violations)
    if len(hits) == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _scan_blocks(count: int, cells_per_item: int, block: Callable[[int, int], np.ndarray],
                 settings: Settings) -> Optional[Tuple[int, ...]]:
    """First violation over blocks of the leading quantifier; blocks may run on worker threads."""
    step = max(1, settings.chunk_size // max(1, cells_per_item))
    ranges = [(start, min(start + step, count)) for start in range(0, count, step)]

    def run(bounds):
        start, stop = bounds
        hit = _first_hit(block(start, stop))
        if hit is None:
            return None
        logger.debug(f"[_scan_blocks] violation in block {start}..{stop}")
        return (hit[0] + start,) + hit[1:]

    if settings.workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            results = [r for r in pool.map(run, ranges) if r is not None]
        return min(results) if results else None
    for bounds in ranges:
        hit = run(bounds)
        if hit is not None:
            return hit
    return None


def _scan_events(event_count: int, per_event: Callable[[int], Optional[Tuple[int, ...]]],
                 settings: Settings) -> Optional[Tuple[int, ...]]:
    """Least (tuple..., event) over every event; each event reports its local minimum."""
    def run(event):
        hit = per_event(event)
        return None if hit is None else hit + (event,)

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            results = [r for r in pool.map(run, range(event_count)) if r is not None]
    else:
        results = [r for r in map(run, range(event_count)) if r is not None]
    return min(results) if results else None


# ---------------------------------------------------------------------------
# Quantifier-space budget

def quantifier_space_size(frame: DecisionFrame, axiom: AxiomId) -> int:
    sizes = []
    for name in AXIOM_FIELDS[axiom]:
        if name in ACT_FIELDS:
            sizes.append(frame.act_count)
        elif name in OUTCOME_FIELDS:
            sizes.append(frame.outcome_count)
    return reduce(mul, sizes, 1)


def _check_budget(frame: DecisionFrame, axiom: AxiomId, settings: Settings):
    size = quantifier_space_size(frame, axiom)
    enforce_budget(axiom.label, size, settings)


# ---------------------------------------------------------------------------
# Vectorized checkers; each returns the raw witness tuple or None.

class _Context:
    def __init__(self, rel: PreferenceRelation, settings: Settings):
        self.rel = rel
        self.settings = settings
        self.frame = rel.frame
        self.space = rel.space
        self.r = rel.full_ranks()
        self.key = rel.outcome_key
        self.constants = self.space.constants
        self.full = self.frame.full_event
        self.event_count = self.full + 1

    def parts(self, event: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.space.part(event), self.space.part(self.full & ~event)

    def restrictions(self, event: int) -> Tuple[np.ndarray, np.ndarray]:
        """Distinct partial indices on the event and on its complement, ascending."""
        inside, outside = self.parts(event)
        return np.unique(inside), np.unique(outside)

    def bets(self) -> np.ndarray:
        """ranks of xAx' for every x, x', A: shape (X, X, E)."""
        table = np.empty((self.frame.outcome_count, self.frame.outcome_count, self.event_count), dtype=np.int64)
        for event in range(self.event_count):
            inside, outside = self.parts(event)
            table[:, :, event] = self.r[inside[self.constants][:, None] + outside[self.constants][None, :]]
        return table


def _sure_thing(ctx: _Context, strict: bool) -> Optional[Tuple[int, ...]]:
    def per_event(event):
        inside, outside = ctx.restrictions(event)
        m = ctx.r[inside[:, None] + outside[None, :]]
        first = (m[:, None, :] < m[None, :, :]) if strict else (m[:, None, :] <= m[None, :, :])
        second = m[:, None, :] > m[None, :, :]
        pair = _first_hit(first.any(axis=2) & second.any(axis=2))
        if pair is None:
            return None
        a1, a2 = pair
        b1 = int(np.argmax(first[a1, a2]))
        b2 = int(np.argmax(second[a1, a2]))
        return (int(inside[a1]), int(inside[a2]), int(outside[b1]), int(outside[b2]))

    return _scan_events(ctx.event_count, per_event, ctx.settings)


def _null_events(ctx: _Context) -> np.ndarray:
    null = np.zeros(ctx.event_count, dtype=bool)
    for event in range(ctx.event_count):
        inside, outside = ctx.restrictions(event)
        m = ctx.r[inside[:, None] + outside[None, :]]
        null[event] = bool((m == m[0:1, :]).all())
    return null


def _sav3(ctx: _Context) -> Optional[Tuple[int, ...]]:
    null = _null_events(ctx)
    outcome_leq = ctx.key[:, None] <= ctx.key[None, :]

    def per_event(event):
        if null[event]:
            return None
        inside, outside = ctx.parts(event)
        ranks = ctx.r[inside[ctx.constants][:, None] + outside[None, :]]
        conditional = ranks[:, None, :] <= ranks[None, :, :]
        return _first_hit(conditional != outcome_leq[:, :, None])

    return _scan_events(ctx.event_count, per_event, ctx.settings)


def _sav4(ctx: _Context, weak_form: bool) -> Optional[Tuple[int, ...]]:
    bets = ctx.bets()
    valid = ctx.key[:, None] > ctx.key[None, :]
    key = ctx.key
    count = ctx.frame.outcome_count
    if not weak_form:
        leq = bets[:, :, :, None] <= bets[:, :, None, :]

        def block(start, stop):
            lhs = leq[start:stop][:, :, None, None, :, :]
            rhs = leq[None, None, :, :, :, :]
            both = valid[start:stop][:, :, None, None, None, None] & valid[None, None, :, :, None, None]
            return both & (lhs != rhs)
    else:
        less = bets[:, :, :, None] < bets[:, :, None, :]
        reversed_less = np.swapaxes(less, 2, 3)

        def block(start, stop):
            both = valid[start:stop][:, :, None, None, None, None] & valid[None, None, :, :, None, None]
            # xAx' < xBx' must not flip to yBy' < yAy'
            first = both & less[start:stop][:, :, None, None, :, :] & reversed_less[None, None, :, :, :, :]
            nested = ((key[start:stop][:, None, None, None] >= key[None, None, :, None])
                      & (key[None, None, None, :] >= key[None, :, None, None]))
            nested = nested & valid[None, None, :, :] & valid[start:stop][:, :, None, None]
            second = (nested[:, :, :, :, None, None] & less[None, None, :, :, :, :]
                      & ~less[start:stop][:, :, None, None, :, :])
            return first | second

    cells = count ** 3 * ctx.event_count ** 2
    return _scan_blocks(count, cells, block, ctx.settings)


def _ws3(ctx: _Context) -> Optional[Tuple[int, ...]]:
    outcome_leq = ctx.key[:, None] <= ctx.key[None, :]

    def per_event(event):
        inside, outside = ctx.parts(event)
        ranks = ctx.r[inside[ctx.constants][:, None] + outside[None, :]]
        return _first_hit(outcome_leq[:, :, None] & (ranks[:, None, :] > ranks[None, :, :]))

    return _scan_events(ctx.event_count, per_event, ctx.settings)


def _restricted_dominance(ctx: _Context, conjunctive: bool) -> Optional[Tuple[int, ...]]:
    r = ctx.r
    mode = WORST if conjunctive else BEST
    combined = r[ctx.space.lattice_table(ctx.key, mode, right=ctx.constants)]
    r_const = r[ctx.constants]

    def block(start, stop):
        rf = r[start:stop][:, None, None]
        rg = r[None, :, None]
        ry = r_const[None, None, :]
        rc = combined[None, :, :]
        if conjunctive:
            return (rg > rf) & (ry > rf) & ~(rc > rf)
        return (rf > rg) & (rf > ry) & ~(rf > rc)

    return _scan_blocks(ctx.space.size, ctx.space.size * len(ctx.constants), block, ctx.settings)


def _dominance(ctx: _Context, conjunctive: bool) -> Optional[Tuple[int, ...]]:
    r = ctx.r
    combined = r[ctx.space.lattice_table(ctx.key, WORST if conjunctive else BEST)]

    def block(start, stop):
        rf = r[start:stop][:, None, None]
        rg = r[None, :, None]
        rh = r[None, None, :]
        rc = combined[None, :, :]
        if conjunctive:
            return (rg > rf) & (rh > rf) & ~(rc > rf)
        return (rf > rg) & (rf > rh) & ~(rf > rc)

    return _scan_blocks(ctx.space.size, ctx.space.size ** 2, block, ctx.settings)


def _cod(ctx: _Context) -> Optional[Tuple[int, ...]]:
    r = ctx.r
    comonotonic = ctx.space.comonotonic_table(ctx.key)
    joins = r[ctx.space.lattice_table(ctx.key, BEST)]
    meets = r[ctx.space.lattice_table(ctx.key, WORST)]

    def block(start, stop):
        rf = r[start:stop][:, None]
        rg = r[None, :]
        rj = joins[start:stop]
        rm = meets[start:stop]
        broken = ((rj > rf) & (rj != rg)) | ((rm < rf) & (rm != rg))
        return comonotonic[start:stop] & broken

    return _scan_blocks(ctx.space.size, ctx.space.size, block, ctx.settings)


def _attitude(ctx: _Context, optimistic: bool) -> Optional[Tuple[int, ...]]:
    r = ctx.r

    def per_event(event):
        compound = r[ctx.space.compound_table(event)]
        swapped = compound.T
        rf = r[:, None]
        if optimistic:
            return _first_hit((compound < rf) & (rf > swapped))
        return _first_hit((compound > rf) & (rf < swapped))

    return _scan_events(ctx.event_count, per_event, ctx.settings)


def _sav5(ctx_rel: PreferenceRelation) -> Optional[Tuple[int, ...]]:
    key = ctx_rel.outcome_key
    return None if key.max() > key.min() else ()


# ---------------------------------------------------------------------------
# Public checks

def _to_witness(rel: PreferenceRelation, axiom: AxiomId, raw: Tuple[int, ...]) -> Dict[str, Any]:
    if axiom is AxiomId.SAV5:
        return {'outcomes': tuple(range(rel.frame.outcome_count))}
    witness = {}
    for name, value in zip(AXIOM_FIELDS[axiom], raw):
        witness[name] = rel.space.act(value) if name in ACT_FIELDS else int(value)
    if axiom is AxiomId.SAV4P:
        witness['clause'] = 1 if _sav4p_clause_one(rel, witness) else 2
    return witness


def check_axiom(rel: PreferenceRelation, axiom: AxiomId,
                settings: Optional[Settings] = None) -> AxiomVerdict:
    """Exhaustively evaluate one axiom on the relation."""
    settings = settings or get_settings()
    if axiom is AxiomId.SAV1:
        # ranks make every relation a complete preorder
        return AxiomVerdict(axiom.label, True)
    _check_budget(rel.frame, axiom, settings)
    if axiom is AxiomId.SAV5:
        raw = _sav5(rel)
    else:
        ctx = _Context(rel, settings)
        raw = {
            AxiomId.SAV2: lambda: _sure_thing(ctx, strict=False),
            AxiomId.SAV3: lambda: _sav3(ctx),
            AxiomId.SAV4: lambda: _sav4(ctx, weak_form=False),
            AxiomId.SAV4P: lambda: _sav4(ctx, weak_form=True),
            AxiomId.WS3: lambda: _ws3(ctx),
            AxiomId.RCD: lambda: _restricted_dominance(ctx, conjunctive=True),
            AxiomId.RDD: lambda: _restricted_dominance(ctx, conjunctive=False),
            AxiomId.CD: lambda: _dominance(ctx, conjunctive=True),
            AxiomId.DD: lambda: _dominance(ctx, conjunctive=False),
            AxiomId.COD: lambda: _cod(ctx),
            AxiomId.OPTIMISM: lambda: _attitude(ctx, optimistic=True),
            AxiomId.PESSIMISM: lambda: _attitude(ctx, optimistic=False),
        }[axiom]()
    if raw is None:
        logger.info(f"[check_axiom] {axiom.label} holds")
        return AxiomVerdict(axiom.label, True)
    witness = _to_witness(rel, axiom, raw)
    logger.info(f"[check_axiom] {axiom.label} fails: {witness}")
    return AxiomVerdict(axiom.label, False, witness)


def check_axioms(rel: PreferenceRelation, axioms: Iterable[AxiomId],
                 settings: Optional[Settings] = None) -> List[AxiomVerdict]:
    return [check_axiom(rel, axiom, settings) for axiom in axioms]


def find_sure_thing_witness(rel: PreferenceRelation, settings: Optional[Settings] = None) -> Optional[Dict[str, Any]]:
    """Least (f, g, h, h', A) with fAh strictly below gAh while fAh' is strictly above gAh'."""
    settings = settings or get_settings()
    _check_budget(rel.frame, AxiomId.SAV2, settings)
    raw = _sure_thing(_Context(rel, settings), strict=True)
    return None if raw is None else _to_witness(rel, AxiomId.SAV2, raw)


# ---------------------------------------------------------------------------
# Literal scalar evaluation, used to replay witnesses

def _meet(key, f: Act, g: Act) -> Act:
    return tuple(a if key[a] <= key[b] else b for a, b in zip(f, g))


def _join(key, f: Act, g: Act) -> Act:
    return tuple(a if key[a] >= key[b] else b for a, b in zip(f, g))


def _compound(f: Act, event: int, g: Act) -> Act:
    return tuple(f[s] if event >> s & 1 else g[s] for s in range(len(f)))


def _constant(rel: PreferenceRelation, x: int) -> Act:
    return (x,) * rel.frame.state_count


def _comonotonic(key, f: Act, g: Act) -> bool:
    states = range(len(f))
    return not any(key[f[s]] > key[f[t]] and key[g[s]] < key[g[t]] for s in states for t in states)


def _sav4p_clause_one(rel: PreferenceRelation, w: Dict[str, Any]) -> bool:
    rank = rel.rank_of_act
    key = rel.outcome_key
    x, xp, y, yp, a, b = (w[k] for k in AXIOM_FIELDS[AxiomId.SAV4P])
    if not (key[x] > key[xp] and key[y] > key[yp]):
        return False
    bet = lambda u, e, v: _compound(_constant(rel, u), e, _constant(rel, v))
    return rank(bet(x, a, xp)) < rank(bet(x, b, xp)) and rank(bet(y, b, yp)) < rank(bet(y, a, yp))


def replay_witness(rel: PreferenceRelation, verdict: AxiomVerdict) -> bool:
    """True when the verdict's witness, evaluated literally, violates its axiom."""
    if verdict.holds:
        return False
    axiom = next(a for a in AxiomId if a.label == verdict.axiom)
    w = verdict.witness
    rank = rel.rank_of_act
    key = rel.outcome_key
    const = lambda x: _constant(rel, x)
    bet = lambda u, e, v: _compound(const(u), e, const(v))

    if axiom is AxiomId.SAV5:
        return key.max() == key.min()
    if axiom is AxiomId.SAV2:
        f, g, h, hp, a = (w[k] for k in AXIOM_FIELDS[axiom])
        return (rank(_compound(f, a, h)) <= rank(_compound(g, a, h))
                and rank(_compound(f, a, hp)) > rank(_compound(g, a, hp)))
    if axiom is AxiomId.SAV3:
        x, y, h, a = (w[k] for k in AXIOM_FIELDS[axiom])
        if is_null_event(rel, a):
            return False
        return (rank(_compound(const(x), a, h)) <= rank(_compound(const(y), a, h))) != (key[x] <= key[y])
    if axiom is AxiomId.SAV4:
        x, xp, y, yp, a, b = (w[k] for k in AXIOM_FIELDS[axiom])
        if not (key[x] > key[xp] and key[y] > key[yp]):
            return False
        return (rank(bet(x, a, xp)) <= rank(bet(x, b, xp))) != (rank(bet(y, a, yp)) <= rank(bet(y, b, yp)))
    if axiom is AxiomId.SAV4P:
        x, xp, y, yp, a, b = (w[k] for k in AXIOM_FIELDS[axiom])
        if _sav4p_clause_one(rel, w):
            return True
        nested = key[x] >= key[y] > key[yp] >= key[xp]
        return bool(nested and rank(bet(y, a, yp)) < rank(bet(y, b, yp))
                    and not rank(bet(x, a, xp)) < rank(bet(x, b, xp)))
    if axiom is AxiomId.WS3:
        x, y, h, b = (w[k] for k in AXIOM_FIELDS[axiom])
        return key[x] <= key[y] and rank(_compound(const(x), b, h)) > rank(_compound(const(y), b, h))
    if axiom is AxiomId.RCD:
        f, g, y = (w[k] for k in AXIOM_FIELDS[axiom])
        return rank(g) > rank(f) and rank(const(y)) > rank(f) and not rank(_meet(key, g, const(y))) > rank(f)
    if axiom is AxiomId.RDD:
        f, g, y = (w[k] for k in AXIOM_FIELDS[axiom])
        return rank(f) > rank(g) and rank(f) > rank(const(y)) and not rank(f) > rank(_join(key, g, const(y)))
    if axiom is AxiomId.CD:
        f, g, h = (w[k] for k in AXIOM_FIELDS[axiom])
        return rank(g) > rank(f) and rank(h) > rank(f) and not rank(_meet(key, g, h)) > rank(f)
    if axiom is AxiomId.DD:
        f, g, h = (w[k] for k in AXIOM_FIELDS[axiom])
        return rank(f) > rank(g) and rank(f) > rank(h) and not rank(f) > rank(_join(key, g, h))
    if axiom is AxiomId.COD:
        f, g = w['f'], w['g']
        if not _comonotonic(key, f, g):
            return False
        j, m = rank(_join(key, f, g)), rank(_meet(key, f, g))
        return (j > rank(f) and j != rank(g)) or (m < rank(f) and m != rank(g))
    if axiom is AxiomId.OPTIMISM:
        f, g, a = w['f'], w['g'], w['A']
        return rank(_compound(f, a, g)) < rank(f) and rank(f) > rank(_compound(g, a, f))
    if axiom is AxiomId.PESSIMISM:
        f, g, a = w['f'], w['g'], w['A']
        return rank(_compound(f, a, g)) > rank(f) and rank(f) < rank(_compound(g, a, f))
    return False


# ---------------------------------------------------------------------------
# Events, conditional preference and pointwise dominance

@dataclass(frozen=True)
class LikelihoodReport:
    """A <=_L B for every event pair, plus the event pairs whose verdict depends on the stakes."""

    leq: np.ndarray
    disagreements: Tuple[Dict[str, int], ...] = field(default=())

    @property
    def well_defined(self) -> bool:
        return not self.disagreements


def induced_likelihood(rel: PreferenceRelation, settings: Optional[Settings] = None) -> LikelihoodReport:
    """A <=_L B iff xAy is at most as good as xBy for every y <_P x."""
    ctx = _Context(rel, settings or get_settings())
    key = ctx.key
    pairs = [(x, y) for x in range(len(key)) for y in range(len(key)) if key[y] < key[x]]
    if not pairs:
        raise RelationError("no strictly ordered pair of outcomes: the likelihood of events is undefined (Sav 5)")
    enforce_budget("induced likelihood", len(pairs) * ctx.event_count ** 2, ctx.settings)
    bets = ctx.bets()
    stacked = np.stack([bets[x, y] for x, y in pairs])
    comparisons = stacked[:, :, None] <= stacked[:, None, :]
    leq = comparisons.all(axis=0)
    split = comparisons.any(axis=0) & ~leq
    disagreements = []
    for a, b in np.argwhere(split):
        agree = int(np.argmax(comparisons[:, a, b]))
        disagree = int(np.argmax(~comparisons[:, a, b]))
        disagreements.append({
            'x': pairs[agree][0], 'y': pairs[agree][1],
            'x_prime': pairs[disagree][0], 'y_prime': pairs[disagree][1],
            'A': int(a), 'B': int(b),
        })
    return LikelihoodReport(leq, tuple(disagreements))


def is_null_event(rel: PreferenceRelation, event: int) -> bool:
    """fAh ~ gAh for all acts f, g, h."""
    ctx = _Context(rel, get_settings())
    event = rel.frame.check_event(event)
    inside, outside = ctx.restrictions(event)
    m = ctx.r[inside[:, None] + outside[None, :]]
    return bool((m == m[0:1, :]).all())


def null_event_discrepancies(rel: PreferenceRelation) -> List[int]:
    """Events where 'A is null' and 'A ~_L empty set' disagree."""
    ctx = _Context(rel, get_settings())
    null = _null_events(ctx)
    leq = induced_likelihood(rel).leq
    as_likely_as_empty = leq[:, 0] & leq[0, :]
    return [int(e) for e in np.flatnonzero(null != as_likely_as_empty)]


def conditional_preference(rel: PreferenceRelation, f: Sequence[int], g: Sequence[int],
                           event: int, h: Sequence[int]) -> bool:
    """(f <= g) given the event, read off the compound acts fAh and gAh."""
    f, g, h = (rel.frame.check_act(a) for a in (f, g, h))
    return rel.weakly_prefers(_compound(f, event, h), _compound(g, event, h))


def conditional_preference_is_well_defined(rel: PreferenceRelation, f: Sequence[int], g: Sequence[int],
                                           event: int) -> bool:
    """True when the conditional comparison of f and g does not depend on h."""
    verdicts = {conditional_preference(rel, f, g, event, rel.space.act(h)) for h in range(rel.space.size)}
    return len(verdicts) == 1


def check_pointwise_dominance(rel: PreferenceRelation, settings: Optional[Settings] = None) -> AxiomVerdict:
    """f <=_P g statewise implies f is at most as good as g."""
    settings = settings or get_settings()
    r = rel.full_ranks()
    enforce_budget("Pointwise dominance", rel.space.size ** 2, settings)
    levels = rel.outcome_key[rel.space.array]

    def block(start, stop):
        dominated = (levels[start:stop][:, None, :] <= levels[None, :, :]).all(axis=2)
        return dominated & (r[start:stop][:, None] > r[None, :])

    raw = _scan_blocks(rel.space.size, rel.space.size * rel.frame.state_count, block, settings)
    if raw is None:
        return AxiomVerdict('Pointwise dominance', True)
    return AxiomVerdict('Pointwise dominance', False, {'f': rel.space.act(raw[0]), 'g': rel.space.act(raw[1])})


# ---------------------------------------------------------------------------
# Comparative likelihood structures on events

def _event_tables(leq: np.ndarray, what: str, settings: Optional[Settings]) -> Tuple[np.ndarray, int]:
    leq = np.asarray(leq, dtype=bool)
    count = leq.shape[0]
    if leq.shape != (count, count) or count & (count - 1):
        raise RelationError("an event relation is a square matrix over 2^n events")
    enforce_budget(what, count ** 3, settings)
    if not (leq | leq.T).all():
        a, b = np.argwhere(~(leq | leq.T))[0]
        raise RelationError(f"event relation is partial: events {a} and {b} are incomparable")
    return leq, count


def _basic_structure(leq: np.ndarray, count: int) -> Optional[AxiomVerdict]:
    transitivity = _first_hit(leq[:, :, None] & leq[None, :, :] & ~leq[:, None, :])
    if transitivity is not None:
        a, b, c = transitivity
        return AxiomVerdict('A1', False, {'A': a, 'B': b, 'C': c})
    full = count - 1
    if not (leq[0, full] and not leq[full, 0]):
        return AxiomVerdict('A2', False, {'A': 0, 'B': full})
    if not leq[0].all():
        return AxiomVerdict('A3', False, {'A': int(np.argmax(~leq[0]))})
    return None


def is_comparative_possibility(leq: np.ndarray, settings: Optional[Settings] = None) -> AxiomVerdict:
    """A1, A2, A3 and B <=_L C implies A u B <=_L A u C."""
    leq, count = _event_tables(leq, "comparative possibility", settings)
    failure = _basic_structure(leq, count)
    if failure is not None:
        return failure
    idx = np.arange(count)
    unions_b = idx[:, None, None] | idx[None, :, None]
    unions_c = idx[:, None, None] | idx[None, None, :]
    hit = _first_hit(leq[None, :, :] & ~leq[unions_b, unions_c])
    if hit is not None:
        a, b, c = hit
        return AxiomVerdict('Pi', False, {'A': a, 'B': b, 'C': c})
    return AxiomVerdict('comparative possibility', True)


def is_comparative_probability(leq: np.ndarray, settings: Optional[Settings] = None) -> AxiomVerdict:
    """A1, A2, A3 and, for A disjoint from B u C, B <=_L C iff A u B <=_L A u C."""
    leq, count = _event_tables(leq, "comparative probability", settings)
    failure = _basic_structure(leq, count)
    if failure is not None:
        return failure
    idx = np.arange(count)
    a_idx = idx[:, None, None]
    b_idx = idx[None, :, None]
    c_idx = idx[None, None, :]
    disjoint = (a_idx & (b_idx | c_idx)) == 0
    hit = _first_hit(disjoint & (leq[None, :, :] != leq[a_idx | b_idx, a_idx | c_idx]))
    if hit is not None:
        a, b, c = hit
        return AxiomVerdict('P', False, {'A': a, 'B': b, 'C': c})
    return AxiomVerdict('comparative probability', True)
