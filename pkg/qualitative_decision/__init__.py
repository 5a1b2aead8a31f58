from .acts import ActSpace, DecisionFrame, binary_act, compound_act, constant_act, decompose_act, level_set
from .capacity import (
    Capacity,
    PossibilityDistribution,
    classify_capacity,
    necessity_capacity,
    possibility_capacity,
    validate_capacity,
)
from .evaluate import (
    binary_act_value,
    expected_utility,
    qu_optimistic,
    qu_pessimistic,
    sugeno_levelcut,
    sugeno_median,
    sugeno_outcome,
)
from .exceptions import QDTError
from .preference import (
    AxiomId,
    AxiomVerdict,
    PreferenceRelation,
    check_axiom,
    induced_likelihood,
    induced_outcome_order,
    is_comparative_possibility,
    is_comparative_probability,
    is_null_event,
    relation_from_pairwise,
    relation_from_ranks,
)
from .scale import Level, Scale, median, order_reverse
from .synthesis import (
    Representation,
    eu_dominance_demo,
    find_sure_thing_violation,
    induce_preorder,
    synthesize_possibilistic,
    synthesize_representation,
    verify_representation,
)

__all__ = [
    'ActSpace', 'DecisionFrame', 'binary_act', 'compound_act', 'constant_act', 'decompose_act', 'level_set',
    'Capacity', 'PossibilityDistribution', 'classify_capacity', 'necessity_capacity', 'possibility_capacity',
    'validate_capacity',
    'binary_act_value', 'expected_utility', 'qu_optimistic', 'qu_pessimistic', 'sugeno_levelcut',
    'sugeno_median', 'sugeno_outcome',
    'QDTError',
    'AxiomId', 'AxiomVerdict', 'PreferenceRelation', 'check_axiom', 'induced_likelihood',
    'induced_outcome_order', 'is_comparative_possibility', 'is_comparative_probability', 'is_null_event',
    'relation_from_pairwise', 'relation_from_ranks',
    'Level', 'Scale', 'median', 'order_reverse',
    'Representation', 'eu_dominance_demo', 'find_sure_thing_violation', 'induce_preorder',
    'synthesize_possibilistic', 'synthesize_representation', 'verify_representation',
]
