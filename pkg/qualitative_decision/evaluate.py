"""Sugeno-integral utility u_S in its three equivalent forms, the binary-act
closed form, the possibilistic utilities QU* / QU_*, and an expected-utility
foil used only to exhibit the dominance properties expected utility lacks.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from qualitative_decision.acts import DecisionFrame, frame_act_space, level_set
from qualitative_decision.capacity import PossibilityDistribution
from qualitative_decision.config import get_settings
from qualitative_decision.exceptions import BudgetExceeded, DistributionError, FrameError
from qualitative_decision.scale import Level, median

logger = logging.getLogger(__name__)

OPTIMISTIC = 'optimistic'
PESSIMISTIC = 'pessimistic'

PROBABILITY_TOLERANCE = 1e-9


def sugeno_levelcut(frame: DecisionFrame, f: Sequence[int]) -> Level:
    """max over lambda in L of min(lambda, sigma(F_lambda))."""
    capacity = frame.require_capacity()
    f = frame.check_act(f)
    best = 0
    for rank in range(frame.scale.size):
        best = max(best, min(rank, capacity(level_set(frame, f, rank))))
    return Level(best, frame.scale)


def sugeno_outcome(frame: DecisionFrame, f: Sequence[int]) -> Level:
    """max over outcomes x of min(mu(x), sigma(F_x))."""
    capacity = frame.require_capacity()
    f = frame.check_act(f)
    best = 0
    for x in range(frame.outcome_count):
        best = max(best, min(frame.mu[x], capacity(level_set(frame, f, frame.mu[x]))))
    return Level(best, frame.scale)


def sugeno_median(frame: DecisionFrame, f: Sequence[int]) -> Level:
    """Median of {sigma(F_{x_i}) : i >= 1} together with {mu(x_i) : i >= 0}.

    Outcomes are sorted by (mu, index), so x_0 is a worst outcome; the
    multiset keeps duplicates and always has 2n + 1 members.
    """
    capacity = frame.require_capacity()
    f = frame.check_act(f)
    ordered = sorted(range(frame.outcome_count), key=lambda x: (frame.mu[x], x))
    members = [frame.scale.level(frame.mu[x]) for x in ordered]
    members += [capacity.level(level_set(frame, f, frame.mu[x])) for x in ordered[1:]]
    return median(members)


def binary_act_value(frame: DecisionFrame, x: int, event: int, y: int) -> Level:
    """u_S(xAy) = max(mu(y), min(mu(x), sigma(A))) once mu(x) >= mu(y).

    When mu(x) < mu(y) the act is rewritten as y(not A)x first.
    """
    capacity = frame.require_capacity()
    x = frame.check_outcome(x)
    y = frame.check_outcome(y)
    event = frame.check_event(event)
    if frame.mu[x] < frame.mu[y]:
        x, y, event = y, x, frame.full_event & ~event
    return Level(max(frame.mu[y], min(frame.mu[x], capacity(event))), frame.scale)


def _check_possibility(frame: DecisionFrame, pi: PossibilityDistribution):
    if pi.scale != frame.scale:
        raise DistributionError("possibility distribution and frame live on different scales")
    if pi.state_count != frame.state_count:
        raise DistributionError(
            f"possibility distribution covers {pi.state_count} states, frame has {frame.state_count}")
    pi.require_normalized()


def qu_optimistic(frame: DecisionFrame, pi: PossibilityDistribution, f: Sequence[int]) -> Level:
    """QU*(f) = max over s of min(pi(s), mu(f(s)))."""
    _check_possibility(frame, pi)
    f = frame.check_act(f)
    return Level(max(min(pi.values[s], frame.mu[x]) for s, x in enumerate(f)), frame.scale)


def qu_pessimistic(frame: DecisionFrame, pi: PossibilityDistribution, f: Sequence[int]) -> Level:
    """QU_*(f) = min over s of max(n(pi(s)), mu(f(s)))."""
    _check_possibility(frame, pi)
    f = frame.check_act(f)
    top = frame.scale.top
    return Level(min(max(top - pi.values[s], frame.mu[x]) for s, x in enumerate(f)), frame.scale)


def sugeno_values(mu: Sequence[int], table: Sequence[int], scale_size: int, acts: np.ndarray) -> np.ndarray:
    """Vectorized level-cut Sugeno integral for every row of ``acts``."""
    levels = np.asarray(mu, dtype=np.int64)[acts]
    table = np.asarray(table, dtype=np.int64)
    bits = np.int64(1) << np.arange(acts.shape[1], dtype=np.int64)
    result = np.zeros(acts.shape[0], dtype=np.int64)
    for rank in range(1, scale_size):
        cut = (levels >= rank) @ bits
        np.maximum(result, np.minimum(rank, table[cut]), out=result)
    return result


def qu_values(mu: Sequence[int], pi: Sequence[int], scale_size: int, acts: np.ndarray, mode: str,
              reverse: bool = True) -> np.ndarray:
    """Vectorized QU* (optimistic) or QU_* (pessimistic).

    With ``reverse=False`` the pessimistic form uses pi(s) where n(pi(s))
    belongs; kept only to compare the two readings of that formula.
    """
    levels = np.asarray(mu, dtype=np.int64)[acts]
    pi = np.asarray(pi, dtype=np.int64)
    if mode == OPTIMISTIC:
        return np.minimum(pi[None, :], levels).max(axis=1)
    if mode == PESSIMISTIC:
        weights = (scale_size - 1 - pi) if reverse else pi
        return np.maximum(weights[None, :], levels).min(axis=1)
    raise FrameError(f"unknown possibilistic mode {mode!r}")


def utilities(frame: DecisionFrame, budget: Optional[int] = None) -> np.ndarray:
    """u_S of every act of X^S, indexed in lexicographic act order."""
    capacity = frame.require_capacity()
    budget = budget if budget is not None else get_settings().act_budget
    if frame.act_count > budget:
        raise BudgetExceeded('act space', frame.act_count, budget)
    space = frame_act_space(frame)
    logger.debug(f"[utilities] evaluating {space.size} acts")
    return sugeno_values(frame.mu, capacity.table, frame.scale.size, space.array)


def expected_utility(probabilities: Sequence[float], payoffs: Sequence[float]) -> float:
    """Probability-weighted sum of per-state payoffs.

    The one cardinal computation in the package; it exists to show how
    averaging breaks restricted conjunctive / disjunctive dominance.
    """
    weights = np.asarray(probabilities, dtype=float)
    values = np.asarray(payoffs, dtype=float)
    if weights.ndim != 1 or weights.shape != values.shape:
        raise DistributionError(f"{weights.size} probabilities for {values.size} payoffs")
    if weights.size == 0:
        raise DistributionError("expected utility needs at least one state")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise DistributionError(f"probabilities must be finite and non-negative, got {weights.tolist()}")
    if abs(weights.sum() - 1.0) > PROBABILITY_TOLERANCE:
        raise DistributionError(f"probabilities sum to {weights.sum()}, not 1")
    return float(weights @ values)
