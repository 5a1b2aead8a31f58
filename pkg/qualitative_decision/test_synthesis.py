import itertools

import pytest

from qualitative_decision.acts import DecisionFrame
from qualitative_decision.capacity import (
    Capacity,
    PossibilityDistribution,
    necessity_capacity,
    possibility_capacity,
)
from qualitative_decision.evaluate import OPTIMISTIC, PESSIMISTIC
from qualitative_decision.exceptions import FrameError, PreconditionError
from qualitative_decision.preference import (
    AxiomId,
    check_axiom,
    coarsen_relation,
    dense_ranks,
    relation_from_ranks,
    replay_witness,
)
from qualitative_decision.scale import Scale
from qualitative_decision.synthesis import (
    GENERAL_PRECONDITIONS,
    Representation,
    eu_dominance_demo,
    expected_utility_relation,
    find_distinguishing_pair,
    find_sure_thing_violation,
    induce_preorder,
    rcd_violated,
    rdd_violated,
    search_eu_violation,
    synthesize_possibilistic,
    synthesize_representation,
    verify_representation,
)


def order_isomorphic(left, right):
    return all((a <= b) == (c <= d) for (a, c), (b, d) in itertools.product(zip(left, right), repeat=2))


def distributions(state_count, scale):
    for values in itertools.product(range(scale.size), repeat=state_count):
        if max(values) == scale.top:
            yield PossibilityDistribution(scale, values)


def test_single_state_relation_ranks_constant_acts_by_utility(make_frame):
    frame = make_frame(1, (1, 0, 2), [0, 2])
    rel = induce_preorder(frame)
    assert tuple(rel.ranks) == (1, 0, 2)
    rep = synthesize_representation(rel)
    assert rep.mu == (1, 0, 2)
    assert rep.capacity.table == (0, 2)


def test_round_trip_recovers_the_capacity_order(seeded_frames):
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        rep = synthesize_representation(rel)
        assert verify_representation(rel, rep)
        assert order_isomorphic(rep.capacity.table, frame.capacity.table)
        assert order_isomorphic(rep.mu, frame.mu)
        assert rep.frame().capacity == rep.capacity


def test_perturbed_representation_is_caught(seeded_frames):
    caught = 0
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        rep = synthesize_representation(rel)
        table = list(rep.capacity.table)
        for mask in range(1, len(table) - 1):
            if table[mask] < rep.scale.top:
                table[mask] += 1
                break
        else:
            continue
        perturbed = Representation(rep.scale, rep.mu, Capacity(rep.state_count, rep.scale, tuple(table)),
                                   rep.provenance)
        if not verify_representation(rel, perturbed):
            f, g = find_distinguishing_pair(rel, perturbed)
            assert (rel.rank_of_act(f) <= rel.rank_of_act(g)) != (
                perturbed.utilities()[rel.space.index(f)] <= perturbed.utilities()[rel.space.index(g)])
            caught += 1
    assert caught > 0


def test_trivial_relation_verifies_only_in_diagnostic_mode():
    frame = DecisionFrame(2, Scale(3), (0, 2))
    rel = relation_from_ranks(frame, [0] * frame.act_count)
    with pytest.raises(PreconditionError) as info:
        synthesize_representation(rel)
    assert info.value.axiom is AxiomId.SAV5
    rep = synthesize_representation(rel, waive_nontriviality=True)
    assert verify_representation(rel, rep)


def test_expected_utility_relation_is_refused_with_rcd():
    frame = DecisionFrame(2, Scale(5), (0, 1, 2, 3, 4), outcome_labels=('2', '3', '10', '100', '1000'))
    rel = expected_utility_relation(frame, (0.93, 0.07), payoffs=(2, 3, 10, 100, 1000))
    with pytest.raises(PreconditionError) as info:
        synthesize_representation(rel)
    assert info.value.axiom is AxiomId.RCD
    assert replay_witness(rel, info.value.verdict)


def test_refusal_on_mutated_relations(seeded_frames):
    refused = 0
    for frame in seeded_frames[:10]:
        rel = induce_preorder(frame)
        ranks = list(rel.ranks)
        worst = rel.space.index((frame.worst_outcome,) * frame.state_count)
        best = rel.space.index((frame.best_outcome,) * frame.state_count)
        ranks[worst], ranks[best] = ranks[best], ranks[worst]
        mutated = relation_from_ranks(frame, ranks)
        failing = [a for a in GENERAL_PRECONDITIONS if not check_axiom(mutated, a).holds]
        if not failing:
            assert verify_representation(mutated, synthesize_representation(mutated))
            continue
        with pytest.raises(PreconditionError) as info:
            synthesize_representation(mutated)
        assert info.value.axiom is failing[0]
        assert replay_witness(mutated, info.value.verdict)
        refused += 1
    assert refused > 0


def test_representation_must_match_the_relation(seeded_frames):
    rel = induce_preorder(seeded_frames[0])
    other = induce_preorder(DecisionFrame.random(2, 3, Scale(3), 1))
    rep = synthesize_representation(other)
    with pytest.raises(FrameError):
        verify_representation(rel, rep)


def test_optimistic_round_trip_over_possibility_frames():
    scale = Scale(3)
    for pi in distributions(3, scale):
        frame = DecisionFrame(3, scale, (0, 1, 2), possibility_capacity(pi))
        rel = induce_preorder(frame)
        result = synthesize_possibilistic(rel, OPTIMISTIC)
        assert order_isomorphic(result.pi.values, pi.values)
        assert result.literal_reading_verifies is None


def test_pessimistic_round_trip_over_necessity_frames():
    scale = Scale(3)
    disagreements = 0
    for pi in distributions(3, scale):
        frame = DecisionFrame(3, scale, (0, 1, 2), necessity_capacity(pi))
        rel = induce_preorder(frame)
        result = synthesize_possibilistic(rel, PESSIMISTIC)
        assert order_isomorphic(result.pi.values, pi.values)
        # degrees used as they stand, without order reversal
        literal = [min(max(p, result.base.mu[x]) for p, x in zip(result.pi.values, rel.space.act(i)))
                   for i in range(rel.space.size)]
        assert result.literal_reading_verifies == order_isomorphic(rel.full_ranks(), literal)
        disagreements += not result.literal_reading_verifies
    assert disagreements > 0


def test_possibilistic_synthesis_refuses_general_capacities(sure_thing_frame):
    rel = induce_preorder(sure_thing_frame)
    with pytest.raises(PreconditionError) as info:
        synthesize_possibilistic(rel, OPTIMISTIC)
    assert info.value.axiom is AxiomId.DD
    assert replay_witness(rel, info.value.verdict)
    with pytest.raises(PreconditionError) as info:
        synthesize_possibilistic(rel, PESSIMISTIC)
    assert info.value.axiom is AxiomId.CD
    assert replay_witness(rel, info.value.verdict)


def test_sure_thing_violation_on_the_general_capacity(sure_thing_frame):
    witness = find_sure_thing_violation(sure_thing_frame)
    assert witness is not None
    rel = induce_preorder(sure_thing_frame)
    f, g, h, h_prime, event = (witness[k] for k in ('f', 'g', 'h', 'h_prime', 'A'))
    compound = lambda a, b: tuple(a[s] if event >> s & 1 else b[s] for s in range(4))
    assert rel.rank_of_act(compound(f, h)) < rel.rank_of_act(compound(g, h))
    assert rel.rank_of_act(compound(f, h_prime)) > rel.rank_of_act(compound(g, h_prime))


def test_no_sure_thing_violation_for_additive_likelihoods(make_frame):
    # sigma(A) ordered like |A|: an additive comparative likelihood
    frame = make_frame(2, (0, 1, 2), [0, 1, 1, 2])
    assert find_sure_thing_violation(frame) is None


def test_possibility_frames_with_two_states_are_searched():
    scale = Scale(3)
    for pi in distributions(2, scale):
        frame = DecisionFrame(2, scale, (0, 1, 2), possibility_capacity(pi))
        witness = find_sure_thing_violation(frame)
        if witness is not None:
            rel = induce_preorder(frame)
            assert not check_axiom(rel, AxiomId.SAV2).holds


def test_dominance_and_attitude_verdicts_coincide(seeded_frames):
    relations = []
    for index, frame in enumerate(seeded_frames):
        rel = induce_preorder(frame)
        relations.append(rel)
        boundary = index % int(dense_ranks(rel.ranks).max())
        relations.append(coarsen_relation(rel, boundary))
    for rel in relations:
        assert check_axiom(rel, AxiomId.DD).holds == check_axiom(rel, AxiomId.OPTIMISM).holds
        assert check_axiom(rel, AxiomId.CD).holds == check_axiom(rel, AxiomId.PESSIMISM).holds


def test_possibility_relations_are_optimistic():
    scale = Scale(3)
    frame = DecisionFrame(3, scale, (0, 1, 2), possibility_capacity(PossibilityDistribution(scale, (2, 1, 0))))
    rel = induce_preorder(frame)
    assert check_axiom(rel, AxiomId.DD).holds
    assert check_axiom(rel, AxiomId.OPTIMISM).holds


def test_expected_utility_demo_numbers():
    demo = eu_dominance_demo()
    assert demo.eu_f == pytest.approx(930.14, abs=1e-9)
    assert demo.eu_g == pytest.approx(9.79, abs=1e-9)
    assert demo.eu_f_meet_c == pytest.approx(9.44, abs=1e-9)
    assert demo.rcd_violation
    assert demo.eu_mirror_f == pytest.approx(-9.79, abs=1e-9)
    assert demo.eu_mirror_join == pytest.approx(-9.44, abs=1e-9)
    assert demo.rdd_violation


def test_degenerate_probability_allows_no_violation():
    assert search_eu_violation('RCD', alphas=(0.0,)) is None
    assert search_eu_violation('RDD', alphas=(0.0,)) is None


def test_grid_search_finds_violations_of_both_kinds():
    found = search_eu_violation('RCD')
    assert found is not None
    assert rcd_violated((found.alpha, 1 - found.alpha), found.f, found.g, found.y)
    found = search_eu_violation('RDD')
    assert found is not None
    assert rdd_violated((found.alpha, 1 - found.alpha), found.f, found.g, found.y)
