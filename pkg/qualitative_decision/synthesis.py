"""Extraction of a Sugeno representation (mu', sigma') from a preference relation,
its possibilistic special cases, and the counterexample generators.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from qualitative_decision.acts import Act, DecisionFrame, act_space, frame_act_space
from qualitative_decision.capacity import (
    Capacity,
    PossibilityDistribution,
    classify_capacity,
    full_mask,
    validate_capacity,
)
from qualitative_decision.config import Settings, get_settings
from qualitative_decision.evaluate import (
    OPTIMISTIC,
    PESSIMISTIC,
    PROBABILITY_TOLERANCE,
    expected_utility,
    qu_values,
    sugeno_values,
    utilities,
)
from qualitative_decision.exceptions import BudgetExceeded, CapacityError, FrameError, PreconditionError, SynthesisError
from qualitative_decision.preference import (
    AxiomId,
    PreferenceRelation,
    check_axiom,
    dense_ranks,
    find_sure_thing_witness,
    relation_from_ranks,
)
from qualitative_decision.scale import Scale

logger = logging.getLogger(__name__)

GENERAL = 'general'

GENERAL_PRECONDITIONS = (AxiomId.SAV1, AxiomId.WS3, AxiomId.SAV5, AxiomId.RCD, AxiomId.RDD)
OPTIMISTIC_PRECONDITIONS = (AxiomId.SAV1, AxiomId.WS3, AxiomId.SAV5, AxiomId.RCD, AxiomId.DD)
PESSIMISTIC_PRECONDITIONS = (AxiomId.SAV1, AxiomId.WS3, AxiomId.SAV5, AxiomId.RDD, AxiomId.CD)

# Decimal places kept when ranking expected utilities
EU_DECIMALS = 9


@dataclass(frozen=True)
class Representation:
    """Quotient scale L', utility mu' and capacity sigma' on L'.

    ``provenance[k]`` is the rank the source relation gives to the acts of
    class k.
    """

    scale: Scale
    mu: Tuple[int, ...]
    capacity: Capacity
    provenance: Tuple[int, ...]
    state_labels: Tuple[str, ...] = ()
    outcome_labels: Tuple[str, ...] = ()

    @property
    def state_count(self) -> int:
        return self.capacity.state_count

    def frame(self) -> DecisionFrame:
        return DecisionFrame(self.state_count, self.scale, self.mu, self.capacity,
                             self.state_labels, self.outcome_labels)

    def utilities(self) -> np.ndarray:
        space = act_space(self.state_count, len(self.mu))
        return sugeno_values(self.mu, self.capacity.table, self.scale.size, space.array)


@dataclass(frozen=True)
class PossibilisticRepresentation:
    mode: str
    pi: PossibilityDistribution
    base: Representation
    # Pessimistic mode only: whether QU_* with pi(s) in place of n(pi(s)) also represents the relation
    literal_reading_verifies: Optional[bool] = None

    @property
    def scale(self) -> Scale:
        return self.base.scale

    @property
    def mu(self) -> Tuple[int, ...]:
        return self.base.mu


def induce_preorder(frame: DecisionFrame, settings: Optional[Settings] = None) -> PreferenceRelation:
    """f <= f' iff u_S(f) <= u_S(f'); ranks are the dense ranks of the utilities."""
    settings = settings or get_settings()
    values = utilities(frame, settings.act_budget)
    logger.info(f"[induce_preorder] {frame.act_count} acts, {len(np.unique(values))} utility levels")
    return relation_from_ranks(frame, dense_ranks(values))


def _require(rel: PreferenceRelation, axioms: Sequence[AxiomId], settings: Settings):
    for axiom in axioms:
        verdict = check_axiom(rel, axiom, settings)
        if not verdict.holds:
            logger.info(f"[synthesize] refused: {axiom.label} fails with {verdict.witness}")
            raise PreconditionError(axiom, verdict)


def _build_representation(rel: PreferenceRelation, waive_nontriviality: bool = False) -> Representation:
    frame = rel.frame
    space = rel.space
    raw = rel.full_ranks()
    classes = dense_ranks(raw)
    provenance = tuple(int(v) for v in np.unique(raw))
    class_count = len(provenance)
    constants = space.constants
    mu = tuple(int(classes[c]) for c in constants)

    if class_count < 2:
        if not waive_nontriviality:
            raise SynthesisError("a single indifference class cannot carry a scale with distinct extremes")
        scale = Scale(2)
        table = tuple(0 for _ in range(1 << frame.state_count))
        # diagnostic only: sigma' is constant and does not satisfy the boundary conditions
        capacity = Capacity(frame.state_count, scale, table)
        return Representation(scale, mu, capacity, provenance, frame.state_labels, frame.outcome_labels)

    scale = Scale(class_count)
    key = rel.outcome_key
    best = int(np.flatnonzero(key == key.max())[0])
    worst = int(np.flatnonzero(key == key.min())[0])
    if mu[best] != scale.top or mu[worst] != scale.bottom:
        raise SynthesisError(
            f"constant acts span classes {mu[worst]}..{mu[best]}, the relation has {class_count} classes")

    full = frame.full_event
    table = []
    for event in range(full + 1):
        bet = space.part(event)[constants[best]] + space.part(full & ~event)[constants[worst]]
        table.append(int(classes[bet]))
    try:
        capacity = validate_capacity(table, frame.state_count, scale)
    except CapacityError as e:
        raise SynthesisError(f"bets x^*Ax_* do not form a capacity: {e}")

    # xAx_* must sit in class min(mu'(x), sigma'(A))
    for event in range(full + 1):
        inside, outside = space.part(event), space.part(full & ~event)
        for x in range(frame.outcome_count):
            observed = int(classes[inside[constants[x]] + outside[constants[worst]]])
            if observed != min(mu[x], table[event]):
                raise SynthesisError(
                    f"class of {frame.outcome_labels[x]} A x_* with A={event} is {observed}, "
                    f"expected min({mu[x]}, {table[event]})")

    # every act sits in the class of the join of its binary parts x F_x x_*
    levels = key[space.array]
    decomposed = np.zeros(space.size, dtype=np.int64)
    for x in range(frame.outcome_count):
        binary = np.where(levels >= key[x], x, worst) @ space.weights
        np.maximum(decomposed, classes[binary], out=decomposed)
    mismatch = np.flatnonzero(decomposed != classes)
    if len(mismatch):
        raise SynthesisError(f"act {space.act(int(mismatch[0]))} is not indifferent to the join of its binary parts")

    return Representation(scale, mu, capacity, provenance, frame.state_labels, frame.outcome_labels)


def synthesize_representation(rel: PreferenceRelation, settings: Optional[Settings] = None,
                              waive_nontriviality: bool = False) -> Representation:
    """Sav 1, WS 3, Sav 5, RCD and RDD, then the quotient representation.

    ``waive_nontriviality`` skips Sav 5 and is meant for diagnostics only.
    """
    settings = settings or get_settings()
    axioms = [a for a in GENERAL_PRECONDITIONS if not (waive_nontriviality and a is AxiomId.SAV5)]
    _require(rel, axioms, settings)
    rep = _build_representation(rel, waive_nontriviality)
    if not verify_representation(rel, rep):
        f, g = find_distinguishing_pair(rel, rep)
        raise SynthesisError(f"synthesized representation misorders acts {f} and {g}")
    logger.info(f"[synthesize_representation] {rep.scale.size} classes")
    return rep


def _check_matches(rel: PreferenceRelation, rep: Representation):
    if rep.state_count != rel.frame.state_count or len(rep.mu) != rel.frame.outcome_count:
        raise FrameError(
            f"representation is over {rep.state_count} states / {len(rep.mu)} outcomes, "
            f"relation over {rel.frame.state_count} / {rel.frame.outcome_count}")


def _same_order(ranks: np.ndarray, values: np.ndarray) -> bool:
    return bool(np.array_equal(dense_ranks(ranks), dense_ranks(values)))


def verify_representation(rel: PreferenceRelation, rep: Representation) -> bool:
    """True iff every pair of acts compares the same way under rel and under u_S(mu', sigma')."""
    _check_matches(rel, rep)
    return _same_order(rel.full_ranks(), rep.utilities())


def find_distinguishing_pair(rel: PreferenceRelation, rep: Representation) -> Optional[Tuple[Act, Act]]:
    """First act pair (f, g) whose comparison differs between rel and the representation."""
    _check_matches(rel, rep)
    ranks = rel.full_ranks()
    values = rep.utilities()
    for f in range(len(ranks)):
        differs = (ranks[f] <= ranks) != (values[f] <= values)
        if differs.any():
            g = int(np.argmax(differs))
            return rel.space.act(f), rel.space.act(g)
    return None


def synthesize_possibilistic(rel: PreferenceRelation, mode: str,
                             settings: Optional[Settings] = None) -> PossibilisticRepresentation:
    """QU* (optimistic) or QU_* (pessimistic) representation on the quotient scale."""
    settings = settings or get_settings()
    if mode == OPTIMISTIC:
        _require(rel, OPTIMISTIC_PRECONDITIONS, settings)
    elif mode == PESSIMISTIC:
        _require(rel, PESSIMISTIC_PRECONDITIONS, settings)
    else:
        raise FrameError(f"unknown possibilistic mode {mode!r}")

    base = _build_representation(rel)
    sigma = base.capacity
    n = rel.frame.state_count
    full = full_mask(n)
    classification = classify_capacity(sigma)
    top = base.scale.top
    if mode == OPTIMISTIC:
        if not classification.maxitive:
            raise SynthesisError(f"sigma' is not maxitive: {classification.maxitive_witness}")
        pi = PossibilityDistribution(base.scale, tuple(sigma(1 << s) for s in range(n)))
    else:
        if not classification.minitive:
            raise SynthesisError(f"sigma' is not minitive: {classification.minitive_witness}")
        pi = PossibilityDistribution(base.scale, tuple(top - sigma(full & ~(1 << s)) for s in range(n)))

    space = rel.space
    values = qu_values(base.mu, pi.values, base.scale.size, space.array, mode)
    if not _same_order(rel.full_ranks(), values):
        raise SynthesisError(f"{mode} possibilistic utility with pi={pi.values} misorders the relation")
    literal = None
    if mode == PESSIMISTIC:
        literal_values = qu_values(base.mu, pi.values, base.scale.size, space.array, mode, reverse=False)
        literal = _same_order(rel.full_ranks(), literal_values)
    logger.info(f"[synthesize_possibilistic] {mode}: pi = {pi.values}")
    return PossibilisticRepresentation(mode, pi, base, literal)


def find_sure_thing_violation(frame: DecisionFrame, settings: Optional[Settings] = None) -> Optional[Dict]:
    """Least (f, g, h, h', A) with fAh strictly below gAh and fAh' strictly above gAh' under u_S."""
    settings = settings or get_settings()
    rel = induce_preorder(frame, settings)
    return find_sure_thing_witness(rel, settings)


# ---------------------------------------------------------------------------
# Expected-utility foil

DEMO_ALPHA = 0.93
DEMO_F = (1000.0, 2.0)
DEMO_G = (3.0, 100.0)
DEMO_C = 10.0


@dataclass(frozen=True)
class EuDominanceReport:
    alpha: float
    f: Tuple[float, float]
    g: Tuple[float, float]
    c: float
    eu_f: float
    eu_g: float
    eu_f_meet_c: float
    rcd_violation: bool
    # sign-flipped construction: F = -g, G = -f, y = -c
    mirror_f: Tuple[float, float]
    mirror_g: Tuple[float, float]
    mirror_y: float
    eu_mirror_f: float
    eu_mirror_g: float
    eu_mirror_join: float
    rdd_violation: bool


def _greater(a: float, b: float) -> bool:
    return a > b + PROBABILITY_TOLERANCE


def rcd_violated(probabilities: Sequence[float], f: Sequence[float], g: Sequence[float], y: float) -> bool:
    """g > f and y > f but not (g meet y) > f, under expected utility."""
    eu_f = expected_utility(probabilities, f)
    eu_g = expected_utility(probabilities, g)
    eu_meet = expected_utility(probabilities, np.minimum(g, y))
    return _greater(eu_g, eu_f) and _greater(y, eu_f) and not _greater(eu_meet, eu_f)


def rdd_violated(probabilities: Sequence[float], f: Sequence[float], g: Sequence[float], y: float) -> bool:
    """f > g and f > y but not f > (g join y), under expected utility."""
    eu_f = expected_utility(probabilities, f)
    eu_g = expected_utility(probabilities, g)
    eu_join = expected_utility(probabilities, np.maximum(g, y))
    return _greater(eu_f, eu_g) and _greater(eu_f, y) and not _greater(eu_f, eu_join)


def eu_dominance_demo() -> EuDominanceReport:
    """f = (1000, 2) beats g = (3, 100) and c = 10 beats g, yet f meet c = (10, 2) falls below g."""
    probabilities = (DEMO_ALPHA, 1 - DEMO_ALPHA)
    meet = tuple(min(v, DEMO_C) for v in DEMO_F)
    mirror_f = tuple(-v for v in DEMO_G)
    mirror_g = tuple(-v for v in DEMO_F)
    mirror_y = -DEMO_C
    mirror_join = tuple(max(v, mirror_y) for v in mirror_g)
    return EuDominanceReport(
        alpha=DEMO_ALPHA,
        f=DEMO_F,
        g=DEMO_G,
        c=DEMO_C,
        eu_f=expected_utility(probabilities, DEMO_F),
        eu_g=expected_utility(probabilities, DEMO_G),
        eu_f_meet_c=expected_utility(probabilities, meet),
        rcd_violation=rcd_violated(probabilities, DEMO_G, DEMO_F, DEMO_C),
        mirror_f=mirror_f,
        mirror_g=mirror_g,
        mirror_y=mirror_y,
        eu_mirror_f=expected_utility(probabilities, mirror_f),
        eu_mirror_g=expected_utility(probabilities, mirror_g),
        eu_mirror_join=expected_utility(probabilities, mirror_join),
        rdd_violation=rdd_violated(probabilities, mirror_f, mirror_g, mirror_y),
    )


@dataclass(frozen=True)
class EuViolation:
    kind: str
    alpha: float
    f: Tuple[float, float]
    g: Tuple[float, float]
    y: float


DEFAULT_GRID = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0)
DEFAULT_ALPHAS = (0.25, 0.5, 0.75)


def search_eu_violation(kind: str, values: Sequence[float] = DEFAULT_GRID,
                        alphas: Sequence[float] = DEFAULT_ALPHAS) -> Optional[EuViolation]:
    """First (alpha, f, g, y) on a two-state grid where expected utility breaks RCD or RDD."""
    if kind == AxiomId.RCD.label:
        violated = rcd_violated
    elif kind == AxiomId.RDD.label:
        violated = rdd_violated
    else:
        raise FrameError(f"no expected-utility search for {kind!r}")
    pairs = list(itertools.product(values, repeat=2))
    for alpha in alphas:
        probabilities = (alpha, 1 - alpha)
        for f, g, y in itertools.product(pairs, pairs, values):
            if violated(probabilities, f, g, y):
                logger.info(f"[search_eu_violation] {kind} broken at alpha={alpha}: f={f} g={g} y={y}")
                return EuViolation(kind, alpha, f, g, y)
    return None


def expected_utility_relation(frame: DecisionFrame, probabilities: Sequence[float],
                              payoffs: Optional[Sequence[float]] = None,
                              settings: Optional[Settings] = None) -> PreferenceRelation:
    """Preorder on X^S by expected utility; payoffs default to the mu ranks."""
    settings = settings or get_settings()
    if frame.act_count > settings.act_budget:
        raise BudgetExceeded('act space', frame.act_count, settings.act_budget)
    weights = np.asarray(probabilities, dtype=float)
    expected_utility(weights, np.zeros(frame.state_count))
    values = np.asarray(frame.mu if payoffs is None else payoffs, dtype=float)
    if values.shape != (frame.outcome_count,):
        raise FrameError(f"{values.size} payoffs for {frame.outcome_count} outcomes")
    space = frame_act_space(frame)
    eu = np.round(values[space.array] @ weights, EU_DECIMALS)
    return relation_from_ranks(frame, dense_ranks(eu))
