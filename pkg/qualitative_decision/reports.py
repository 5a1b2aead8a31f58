"""Report dictionaries shared by the command line and the HTTP service.

Every report is plain JSON data: labels instead of indices, subsets as
lists of state labels in state order.
"""
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from qualitative_decision.acts import frame_act_space
from qualitative_decision.capacity import classify_capacity, validate_capacity
from qualitative_decision.documents import FrameDocument, RelationDocument, act_reference, subset_labels
from qualitative_decision.evaluate import expected_utility, sugeno_levelcut, sugeno_median, sugeno_outcome, utilities
from qualitative_decision.exceptions import CapacityError, FrameError, PreconditionError
from qualitative_decision.preference import (
    ACT_FIELDS,
    OUTCOME_FIELDS,
    AxiomId,
    AxiomVerdict,
    PreferenceRelation,
    check_axiom,
    null_event_discrepancies,
)
from qualitative_decision.synthesis import (
    GENERAL,
    EuDominanceReport,
    PossibilisticRepresentation,
    Representation,
    eu_dominance_demo,
    expected_utility_relation,
    find_sure_thing_violation,
    induce_preorder,
    synthesize_possibilistic,
    synthesize_representation,
    verify_representation,
)

logger = logging.getLogger(__name__)

METHODS = {
    'levelcut': sugeno_levelcut,
    'outcome': sugeno_outcome,
    'median': sugeno_median,
}
ALL_METHODS = 'all'

EVENT_FIELDS = {'A', 'B', 'C'}

# Digits kept for expected utilities in reports
EU_DIGITS = 9


def render_witness(doc: FrameDocument, witness: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    frame = doc.frame
    rendered = {}
    for name, value in witness.items():
        if name in ACT_FIELDS:
            rendered[name] = act_reference(doc, value)
        elif name in OUTCOME_FIELDS:
            rendered[name] = frame.outcome_labels[value]
        elif name in EVENT_FIELDS:
            rendered[name] = subset_labels(frame, value)
        elif name == 'outcomes':
            rendered[name] = [frame.outcome_labels[x] for x in value]
        else:
            rendered[name] = value
    return rendered


def verdict_entry(doc: FrameDocument, verdict: AxiomVerdict) -> Dict[str, Any]:
    return {'axiom': verdict.axiom, 'holds': verdict.holds, 'witness': render_witness(doc, verdict.witness)}


def eval_report(doc: FrameDocument, acts: Optional[Sequence[Sequence[int]]] = None,
                method: str = ALL_METHODS) -> Dict[str, Any]:
    """Utilities of the given acts (all acts of X^S when ``acts`` is None)."""
    frame = doc.frame
    frame.require_capacity()
    if not isinstance(method, str) or method != ALL_METHODS and method not in METHODS:
        raise FrameError(f"unknown method {method!r}")
    names = list(METHODS) if method == ALL_METHODS else [method]
    if acts is None:
        # size check before enumerating
        utilities(frame)
        space = frame_act_space(frame)
        acts = [space.act(i) for i in range(space.size)]
    results = []
    agree = True
    for act in acts:
        values = {name: METHODS[name](frame, act).rank for name in names}
        entry = {'act': act_reference(doc, tuple(act)), **values}
        if len(names) > 1:
            entry['agree'] = len(set(values.values())) == 1
            agree = agree and entry['agree']
        results.append(entry)
    if not agree:
        logger.error(f"[eval_report] Sugeno formulations disagree on {doc.source}")
    return {'command': 'eval', 'frame': doc.source, 'methods': names, 'results': results, 'agree': agree}


def capacity_report(doc: FrameDocument) -> Dict[str, Any]:
    frame = doc.frame
    report: Dict[str, Any] = {'command': 'check-capacity', 'frame': doc.source}
    if doc.capacity_table is None and frame.capacity is None:
        raise FrameError("the frame carries no capacity")
    capacity = frame.capacity
    if capacity is None:
        try:
            capacity = validate_capacity(doc.capacity_table, frame.state_count, frame.scale)
        except CapacityError as e:
            witness = None if e.witness is None else [subset_labels(frame, mask) for mask in e.witness]
            report.update({'valid': False, 'error': str(e), 'witness': witness})
            return report
    classification = classify_capacity(capacity)
    pairs = lambda pair: None if pair is None else [subset_labels(frame, mask) for mask in pair]
    report.update({
        'valid': True,
        'maxitive': classification.maxitive,
        'minitive': classification.minitive,
        'maxitive_witness': pairs(classification.maxitive_witness),
        'minitive_witness': pairs(classification.minitive_witness),
    })
    return report


def axioms_report(doc: RelationDocument, rel: PreferenceRelation, axioms: Sequence[AxiomId],
                  null_events: bool = False) -> Dict[str, Any]:
    """Verdicts in the order asked; ``null_events`` adds the events where nullity and A ~ empty set disagree."""
    verdicts = [check_axiom(rel, axiom) for axiom in axioms]
    report = {
        'command': 'check-axioms',
        'relation': doc.source,
        'verdicts': [verdict_entry(doc.frame_document, v) for v in verdicts],
        'holds': all(v.holds for v in verdicts),
    }
    if null_events:
        events = null_event_discrepancies(rel)
        logger.info(f"[axioms_report] {len(events)} null-event discrepancies in {doc.source}")
        report['null_event_discrepancies'] = [subset_labels(doc.frame, mask) for mask in events]
    return report


def representation_entry(doc: FrameDocument, rep: Representation) -> Dict[str, Any]:
    frame = doc.frame
    return {
        'scale': rep.scale.size,
        'mu': {label: level for label, level in zip(frame.outcome_labels, rep.mu)},
        'capacity': [[subset_labels(frame, mask), level] for mask, level in enumerate(rep.capacity.table)],
        'provenance': list(rep.provenance),
    }


def synthesis_report(doc: RelationDocument, rel: PreferenceRelation, mode: str = GENERAL) -> Dict[str, Any]:
    report: Dict[str, Any] = {'command': 'synthesize', 'relation': doc.source, 'mode': mode}
    try:
        if mode == GENERAL:
            rep = synthesize_representation(rel)
            possibilistic = None
        else:
            possibilistic = synthesize_possibilistic(rel, mode)
            rep = possibilistic.base
    except PreconditionError as e:
        report.update({'refused': True, 'verdict': verdict_entry(doc.frame_document, e.verdict)})
        return report
    report.update({'refused': False, 'representation': representation_entry(doc.frame_document, rep)})
    if isinstance(possibilistic, PossibilisticRepresentation):
        report['pi'] = {label: level for label, level in zip(doc.frame.state_labels, possibilistic.pi.values)}
        if possibilistic.literal_reading_verifies is not None:
            report['literal_reading_verifies'] = possibilistic.literal_reading_verifies
    report['verified'] = verify_representation(rel, rep)
    return report


def _eu(value: float) -> float:
    return round(float(value), EU_DIGITS)


def eu_demo_report(demo: Optional[EuDominanceReport] = None) -> Dict[str, Any]:
    demo = demo or eu_dominance_demo()
    return {
        'command': 'counterexample',
        'kind': 'eu-rcd',
        'alpha': demo.alpha,
        'f': list(demo.f),
        'g': list(demo.g),
        'c': demo.c,
        'eu_f': _eu(demo.eu_f),
        'eu_g': _eu(demo.eu_g),
        'eu_f_meet_c': _eu(demo.eu_f_meet_c),
        'rcd_violation': demo.rcd_violation,
        'mirror': {
            'f': list(demo.mirror_f),
            'g': list(demo.mirror_g),
            'y': demo.mirror_y,
            'eu_f': _eu(demo.eu_mirror_f),
            'eu_g': _eu(demo.eu_mirror_g),
            'eu_g_join_y': _eu(demo.eu_mirror_join),
            'rdd_violation': demo.rdd_violation,
        },
    }


def sure_thing_report(doc: FrameDocument) -> Dict[str, Any]:
    witness = find_sure_thing_violation(doc.frame)
    return {
        'command': 'counterexample',
        'kind': 'surething',
        'frame': doc.source,
        'found': witness is not None,
        'witness': render_witness(doc, witness),
    }


def compare_report(doc: FrameDocument, probabilities: Sequence[float]) -> Dict[str, Any]:
    """Sugeno and expected-utility value of every act, and RCD / RDD under both."""
    frame = doc.frame
    # validates the distribution against the state count
    expected_utility(probabilities, np.zeros(frame.state_count))
    sugeno = induce_preorder(frame)
    eu_rel = expected_utility_relation(frame, probabilities)
    values = utilities(frame)
    space = frame_act_space(frame)
    payoffs = np.asarray(frame.mu, dtype=float)
    eu_values = payoffs[space.array] @ np.asarray(probabilities, dtype=float)
    acts: List[Dict[str, Any]] = [
        {'act': act_reference(doc, space.act(i)), 'sugeno': int(values[i]), 'expected_utility': _eu(eu_values[i])}
        for i in range(space.size)
    ]
    checks = {}
    for name, rel in (('sugeno', sugeno), ('expected_utility', eu_rel)):
        checks[name] = [verdict_entry(doc, check_axiom(rel, axiom)) for axiom in (AxiomId.RCD, AxiomId.RDD)]
    divergent = any(not entry['holds'] for entry in checks['expected_utility'])
    return {
        'command': 'compare',
        'frame': doc.source,
        'probabilities': [float(p) for p in probabilities],
        'acts': acts,
        'checks': checks,
        'divergent': divergent,
    }


def _witness_text(witness: Optional[Dict[str, Any]]) -> str:
    if witness is None:
        return ''
    parts = []
    for name, value in witness.items():
        if isinstance(value, list):
            value = '{' + ','.join(str(v) for v in value) + '}'
        parts.append(f"{name}={value}")
    return ' ' + ' '.join(parts)


def render_text(report: Dict[str, Any]) -> str:
    """Human-readable rendering; carries the same verdicts as the JSON form."""
    command = report['command']
    lines: List[str] = []
    if command == 'eval':
        for entry in report['results']:
            values = ' '.join(f"{name}={entry[name]}" for name in report['methods'])
            lines.append(f"{entry['act']}: {values}")
        if len(report['methods']) > 1:
            lines.append('agree' if report['agree'] else 'DISAGREE')
    elif command == 'check-capacity':
        if not report['valid']:
            lines.append(f"invalid: {report['error']}")
            if report['witness'] is not None:
                lines.append('witness: ' + ' '.join('{' + ','.join(s) + '}' for s in report['witness']))
        else:
            lines.append('valid')
            for prop in ('maxitive', 'minitive'):
                witness = report[f"{prop}_witness"]
                suffix = '' if witness is None else ' A={' + ','.join(witness[0]) + '} B={' + ','.join(witness[1]) + '}'
                lines.append(f"{prop}: {'yes' if report[prop] else 'no'}{suffix}")
    elif command == 'check-axioms':
        for entry in report['verdicts']:
            status = 'holds' if entry['holds'] else 'fails'
            lines.append(f"{entry['axiom']}: {status}{_witness_text(entry['witness'])}")
        if 'null_event_discrepancies' in report:
            events = report['null_event_discrepancies']
            detail = ' '.join('{' + ','.join(states) + '}' for states in events) if events else 'none'
            lines.append(f"null events unlike the empty set: {detail}")
    elif command == 'synthesize':
        if report['refused']:
            verdict = report['verdict']
            lines.append(f"refused: {verdict['axiom']} fails{_witness_text(verdict['witness'])}")
        else:
            rep = report['representation']
            lines.append(f"scale: {rep['scale']} levels")
            lines.append('mu: ' + ' '.join(f"{label}={level}" for label, level in rep['mu'].items()))
            for states, level in rep['capacity']:
                lines.append(f"sigma({{{','.join(states)}}}) = {level}")
            if 'pi' in report:
                lines.append('pi: ' + ' '.join(f"{label}={level}" for label, level in report['pi'].items()))
            if 'literal_reading_verifies' in report:
                lines.append(f"literal reading verifies: {'yes' if report['literal_reading_verifies'] else 'no'}")
            lines.append(f"verified: {'yes' if report['verified'] else 'no'}")
    elif command == 'counterexample' and report['kind'] == 'eu-rcd':
        lines.append(f"EU(f) = {report['eu_f']:.2f}")
        lines.append(f"EU(g) = {report['eu_g']:.2f}")
        lines.append(f"EU(f meet c) = {report['eu_f_meet_c']:.2f}")
        lines.append(f"RCD violated: {'yes' if report['rcd_violation'] else 'no'}")
        mirror = report['mirror']
        lines.append(f"mirror EU(f) = {mirror['eu_f']:.2f} EU(g) = {mirror['eu_g']:.2f} "
                     f"EU(g join y) = {mirror['eu_g_join_y']:.2f}")
        lines.append(f"RDD violated: {'yes' if mirror['rdd_violation'] else 'no'}")
    elif command == 'counterexample':
        if report['found']:
            lines.append('sure-thing violation:' + _witness_text(report['witness']))
        else:
            lines.append('no sure-thing violation')
    elif command == 'compare':
        for entry in report['acts']:
            lines.append(f"{entry['act']}: sugeno={entry['sugeno']} eu={entry['expected_utility']:.4f}")
        for name, verdicts in report['checks'].items():
            for entry in verdicts:
                status = 'holds' if entry['holds'] else 'fails'
                lines.append(f"{name} {entry['axiom']}: {status}{_witness_text(entry['witness'])}")
    return '\n'.join(lines) + '\n'
