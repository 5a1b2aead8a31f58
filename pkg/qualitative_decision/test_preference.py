import numpy as np
import pytest

from qualitative_decision.acts import DecisionFrame, act_space
from qualitative_decision.capacity import PossibilityDistribution, likelihood_from_capacity, possibility_capacity
from qualitative_decision.config import Settings
from qualitative_decision.exceptions import BudgetExceeded, QDTError, RelationError
from qualitative_decision.preference import (
    AxiomId,
    check_axiom,
    check_pointwise_dominance,
    coarsen_relation,
    conditional_preference,
    conditional_preference_is_well_defined,
    dense_ranks,
    induced_likelihood,
    induced_outcome_order,
    is_comparative_possibility,
    is_comparative_probability,
    is_null_event,
    null_event_discrepancies,
    relation_from_pairwise,
    relation_from_ranks,
    replay_witness,
)
from qualitative_decision.scale import Scale
from qualitative_decision.synthesis import expected_utility_relation, induce_preorder

SUGENO_PROFILE = (AxiomId.SAV1, AxiomId.SAV5, AxiomId.WS3, AxiomId.SAV4P, AxiomId.RCD, AxiomId.RDD, AxiomId.COD)


@pytest.fixture
def eu_frame():
    labels = ('2', '3', '10', '100', '1000')
    return DecisionFrame(2, Scale(5), (0, 1, 2, 3, 4), outcome_labels=labels)


@pytest.fixture
def eu_relation(eu_frame):
    return expected_utility_relation(eu_frame, (0.93, 0.07), payoffs=(2, 3, 10, 100, 1000))


def test_axiom_names_parse():
    assert AxiomId.parse('SAV4P') is AxiomId.SAV4P
    assert AxiomId.parse("Sav 4'") is AxiomId.SAV4P
    assert AxiomId.parse('optimism') is AxiomId.OPTIMISM
    with pytest.raises(QDTError):
        AxiomId.parse('Sav 6')


def test_induced_relations_have_the_sugeno_axiom_profile(seeded_frames):
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        for axiom in SUGENO_PROFILE:
            verdict = check_axiom(rel, axiom)
            assert verdict.holds, (axiom, verdict.witness)
        assert check_pointwise_dominance(rel).holds


def test_sure_thing_principle_fails_for_a_general_capacity(sure_thing_frame):
    rel = induce_preorder(sure_thing_frame)
    verdict = check_axiom(rel, AxiomId.SAV2)
    assert not verdict.holds
    assert replay_witness(rel, verdict)


def test_expected_utility_breaks_restricted_conjunctive_dominance(eu_relation):
    verdict = check_axiom(eu_relation, AxiomId.RCD)
    assert not verdict.holds
    assert replay_witness(eu_relation, verdict)
    assert check_axiom(eu_relation, AxiomId.WS3).holds
    assert check_axiom(eu_relation, AxiomId.SAV2).holds


def test_every_reported_witness_replays(seeded_frames, eu_relation):
    relations = [eu_relation] + [coarsen_relation(induce_preorder(frame), 0) for frame in seeded_frames[:5]]
    for rel in relations:
        for axiom in AxiomId:
            verdict = check_axiom(rel, axiom)
            if not verdict.holds:
                assert replay_witness(rel, verdict), (axiom, verdict.witness)


def test_witnesses_do_not_depend_on_chunking_or_workers(eu_relation):
    small = Settings(chunk_size=64, workers=3)
    for axiom in (AxiomId.RCD, AxiomId.CD, AxiomId.DD, AxiomId.SAV4, AxiomId.OPTIMISM):
        assert check_axiom(eu_relation, axiom, small) == check_axiom(eu_relation, axiom)


def test_budget_is_enforced(eu_relation):
    with pytest.raises(BudgetExceeded) as info:
        check_axiom(eu_relation, AxiomId.CD, Settings(quantifier_budget=1000))
    assert info.value.size == 25 ** 3


def test_trivial_relation_fails_nontriviality():
    frame = DecisionFrame(2, Scale(3), (0, 2))
    rel = relation_from_ranks(frame, [0] * frame.act_count)
    verdict = check_axiom(rel, AxiomId.SAV5)
    assert not verdict.holds
    assert verdict.witness == {'outcomes': (0, 1)}
    with pytest.raises(RelationError):
        induced_likelihood(rel)


def test_partial_relations():
    frame = DecisionFrame(2, Scale(3), (0, 2))
    space = act_space(2, 2)
    constants = [int(c) for c in space.constants]
    rel = relation_from_ranks(frame, [0, 1], constants)
    assert induced_outcome_order(rel) == (0, 1)
    assert check_axiom(rel, AxiomId.SAV5).holds
    with pytest.raises(RelationError):
        check_axiom(rel, AxiomId.RCD)
    with pytest.raises(RelationError):
        relation_from_ranks(frame, [0, 1], [0, 0])


def test_pairwise_data_is_compressed_to_ranks():
    frame = DecisionFrame(1, Scale(3), (0, 1, 2))
    acts = [(0,), (1,), (2,)]
    weakly = np.array([[True, True, True], [False, True, True], [False, True, True]])
    rel = relation_from_pairwise(frame, acts, weakly)
    assert induced_outcome_order(rel) == (0, 1, 1)


def test_pairwise_cycles_are_reported():
    frame = DecisionFrame(1, Scale(3), (0, 1, 2))
    acts = [(0,), (1,), (2,)]
    cycle = np.array([[True, True, False], [False, True, True], [True, False, True]])
    with pytest.raises(RelationError) as info:
        relation_from_pairwise(frame, acts, cycle)
    assert info.value.verdict.witness == {'intransitive': (0, 1, 2)}
    partial = np.array([[True, False, True], [False, True, True], [False, False, True]])
    with pytest.raises(RelationError) as info:
        relation_from_pairwise(frame, acts, partial)
    assert info.value.verdict.witness == {'incomparable': (0, 1)}


def test_coarsening_merges_adjacent_classes(seeded_frames):
    rel = induce_preorder(seeded_frames[0])
    classes = dense_ranks(rel.ranks)
    merged = dense_ranks(coarsen_relation(rel, 0).ranks)
    assert merged.max() == classes.max() - 1
    assert np.all(np.diff(merged[np.argsort(classes, kind='stable')]) >= 0)


def test_induced_likelihood_matches_the_capacity(seeded_frames):
    for frame in seeded_frames[:10]:
        report = induced_likelihood(induce_preorder(frame))
        assert np.array_equal(report.leq, likelihood_from_capacity(frame.capacity))


def test_conditional_preference(sure_thing_frame):
    rel = induce_preorder(sure_thing_frame)
    f = (1, 0, 0, 0)
    g = (0, 1, 0, 0)
    event = 0b0011
    assert conditional_preference(rel, f, g, event, (0, 0, 1, 0))
    assert not conditional_preference(rel, f, g, event, (0, 0, 0, 1))
    assert not conditional_preference_is_well_defined(rel, f, g, event)


def test_null_events(make_frame):
    frame = make_frame(2, (0, 1, 2), [0, 0, 2, 2])
    rel = induce_preorder(frame)
    assert is_null_event(rel, 0b01)
    assert not is_null_event(rel, 0b10)
    assert is_null_event(rel, 0)


def test_maxitive_likelihood_is_a_comparative_possibility():
    scale = Scale(3)
    capacity = possibility_capacity(PossibilityDistribution(scale, (0, 1, 2)))
    leq = likelihood_from_capacity(capacity)
    assert is_comparative_possibility(leq).holds


def test_possibility_likelihood_is_not_additive():
    scale = Scale(3)
    capacity = possibility_capacity(PossibilityDistribution(scale, (0, 1, 2)))
    leq = likelihood_from_capacity(capacity)
    verdict = is_comparative_probability(leq)
    assert not verdict.holds
    assert verdict.axiom == 'P'
    a, b, c = (verdict.witness[k] for k in ('A', 'B', 'C'))
    assert a & (b | c) == 0
    assert leq[b, c] != leq[a | b, a | c]
    assert verdict.witness == {'A': 0b100, 'B': 0b010, 'C': 0}


def test_comparative_structure_failures():
    leq = np.ones((4, 4), dtype=bool)
    assert is_comparative_possibility(leq).axiom == 'A2'
    partial = np.eye(4, dtype=bool)
    with pytest.raises(RelationError):
        is_comparative_possibility(partial)


def bet(frame, x, event, y):
    return tuple(x if event >> s & 1 else y for s in range(frame.state_count))


def test_sugeno_relations_can_break_sav3_and_sav4(seeded_frames):
    failures = {AxiomId.SAV3: 0, AxiomId.SAV4: 0}
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        for axiom in failures:
            verdict = check_axiom(rel, axiom)
            if not verdict.holds:
                assert replay_witness(rel, verdict)
                failures[axiom] += 1
    assert failures[AxiomId.SAV3] > 0
    assert failures[AxiomId.SAV4] > 0


def test_likelihood_disagreements_follow_sav4(seeded_frames):
    seen = False
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        report = induced_likelihood(rel)
        assert report.well_defined == check_axiom(rel, AxiomId.SAV4).holds
        for entry in report.disagreements:
            a, b = entry['A'], entry['B']
            x, y, xp, yp = entry['x'], entry['y'], entry['x_prime'], entry['y_prime']
            assert rel.rank_of_act(bet(frame, x, a, y)) <= rel.rank_of_act(bet(frame, x, b, y))
            assert rel.rank_of_act(bet(frame, xp, a, yp)) > rel.rank_of_act(bet(frame, xp, b, yp))
            seen = True
    assert seen


def test_sure_thing_capacity_is_not_a_comparative_possibility(sure_thing_frame):
    verdict = is_comparative_possibility(likelihood_from_capacity(sure_thing_frame.capacity))
    assert not verdict.holds
    assert verdict.axiom == 'Pi'
    assert verdict.witness == {'A': 1, 'B': 6, 'C': 9}


def test_counting_measure_is_a_comparative_probability():
    sizes = np.array([bin(mask).count('1') for mask in range(8)])
    leq = sizes[:, None] <= sizes[None, :]
    assert is_comparative_probability(leq).holds


def test_intransitive_event_relation_fails_transitivity():
    sizes = np.array([bin(mask).count('1') for mask in range(4)])
    leq = sizes[:, None] <= sizes[None, :]
    # {s0} < {s1} < S < {s0}
    leq[2, 1] = False
    leq[3, 1] = True
    leq[1, 3] = False
    for check in (is_comparative_possibility, is_comparative_probability):
        verdict = check(leq)
        assert verdict.axiom == 'A1'
        a, b, c = (verdict.witness[k] for k in ('A', 'B', 'C'))
        assert leq[a, b] and leq[b, c] and not leq[a, c]


def test_comonotonic_dominance_implies_restricted_dominance(seeded_frames):
    checked = 0
    for index, frame in enumerate(seeded_frames):
        rel = induce_preorder(frame)
        coarse = coarsen_relation(rel, index % int(dense_ranks(rel.ranks).max()))
        if check_axiom(coarse, AxiomId.COD).holds:
            assert check_axiom(coarse, AxiomId.RCD).holds
            assert check_axiom(coarse, AxiomId.RDD).holds
            checked += 1
    assert checked > 0


def test_pointwise_dominance_beyond_sugeno_relations(seeded_frames, eu_relation):
    relations = [eu_relation]
    for frame in seeded_frames[:10]:
        relations.append(expected_utility_relation(frame, (0.5, 0.3, 0.2)))
    checked = 0
    for rel in relations:
        if all(check_axiom(rel, axiom).holds for axiom in (AxiomId.SAV1, AxiomId.WS3, AxiomId.SAV5)):
            assert check_pointwise_dominance(rel).holds
            checked += 1
    assert checked > 1


def test_null_event_discrepancies_on_induced_relations(seeded_frames):
    found = 0
    for frame in seeded_frames:
        rel = induce_preorder(frame)
        leq = induced_likelihood(rel).leq
        reported = set(null_event_discrepancies(rel))
        for event in range(1 << frame.state_count):
            like_empty = bool(leq[event, 0] and leq[0, event])
            assert (event in reported) == (is_null_event(rel, event) != like_empty)
        found += bool(reported)
    assert found > 0


def test_event_and_dominance_checks_respect_the_budget(eu_relation, sure_thing_frame):
    tight = Settings(quantifier_budget=100)
    with pytest.raises(BudgetExceeded) as info:
        likelihood_from_capacity(sure_thing_frame.capacity, tight)
    assert info.value.size == 16 ** 2
    leq = likelihood_from_capacity(sure_thing_frame.capacity)
    for check in (is_comparative_possibility, is_comparative_probability):
        with pytest.raises(BudgetExceeded) as info:
            check(leq, tight)
        assert info.value.size == 16 ** 3
        assert check(leq, Settings(quantifier_budget=16 ** 3)) == check(leq)
    with pytest.raises(BudgetExceeded) as info:
        check_pointwise_dominance(eu_relation, tight)
    assert info.value.size == 25 ** 2
    with pytest.raises(BudgetExceeded) as info:
        induced_likelihood(eu_relation, tight)
    assert info.value.size == 10 * 4 ** 2
