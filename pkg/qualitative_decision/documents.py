"""JSON frame and relation documents.

A frame document::

    {
      "scale": 3,
      "states": ["s0", "s1"],
      "outcomes": ["x_*", "x", "x^*"],
      "mu": {"x_*": 0, "x": 1, "x^*": 2},
      "capacity": [[[], 0], [["s0"], 1], [["s1"], 1], [["s0", "s1"], 2]],
      "acts": {"f": ["x^*", "x_*"]}
    }

``capacity`` may be replaced by ``"possibility": {"kind": "possibility" |
"necessity", "pi": {"s0": 2, "s1": 1}}``. A relation document names its
frame by path (relative to the relation file) or inline, and either lists
``"ranks"`` keyed by act reference or asks for ``"induce": "capacity"`` /
``"induce": "expected-utility"`` (with ``"probabilities"`` and optional
``"payoffs"`` keyed by outcome label).

An act reference is a declared act name or the comma-joined outcome labels
of the act, one per state.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

from qualitative_decision.acts import Act, DecisionFrame, frame_act_space
from qualitative_decision.capacity import (
    Capacity,
    PossibilityDistribution,
    mask_states,
    necessity_capacity,
    possibility_capacity,
    validate_capacity,
)
from qualitative_decision.config import Settings, get_settings
from qualitative_decision.exceptions import CapacityError, DocumentError, QDTError
from qualitative_decision.preference import PreferenceRelation, relation_from_ranks
from qualitative_decision.scale import Scale
from qualitative_decision.synthesis import expected_utility_relation, induce_preorder

logger = logging.getLogger(__name__)

POSSIBILITY = 'possibility'
NECESSITY = 'necessity'
INDUCE_CAPACITY = 'capacity'
INDUCE_EXPECTED_UTILITY = 'expected-utility'


@dataclass(frozen=True)
class FrameDocument:
    """A loaded frame plus what is needed to write it back unchanged.

    ``capacity_table`` is the table as written (subset index -> level);
    when the document was loaded without validation and the table is
    invalid, ``frame.capacity`` is None.
    """

    frame: DecisionFrame
    acts: Dict[str, Act] = field(default_factory=dict)
    capacity_table: Optional[Dict[int, Any]] = None
    possibility_kind: Optional[str] = None
    pi: Optional[PossibilityDistribution] = None
    source: str = '<inline>'


@dataclass(frozen=True)
class RelationDocument:
    frame_document: FrameDocument
    frame_ref: Optional[str] = None
    ranks: Optional[Dict[str, int]] = None
    induce: Optional[str] = None
    probabilities: Optional[Tuple[float, ...]] = None
    payoffs: Optional[Tuple[float, ...]] = None
    source: str = '<inline>'

    @property
    def frame(self) -> DecisionFrame:
        return self.frame_document.frame

    def relation(self, settings: Optional[Settings] = None) -> PreferenceRelation:
        settings = settings or get_settings()
        if self.induce == INDUCE_CAPACITY:
            return induce_preorder(self.frame, settings)
        if self.induce == INDUCE_EXPECTED_UTILITY:
            return expected_utility_relation(self.frame, self.probabilities, self.payoffs, settings)
        space = frame_act_space(self.frame)
        acts = [space.index(resolve_act(self.frame_document, ref)) for ref in self.ranks]
        return relation_from_ranks(self.frame, list(self.ranks.values()), acts)


def _where(source: str, path: str) -> str:
    return f"{source}#{path}" if path else source


def read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise DocumentError(f"cannot read document: {e.strerror}", path)
    return parse_json(text, path)


def parse_json(text: str, source: str = '<inline>') -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, f"{source}:{e.lineno}:{e.colno}")


def _field(data: Mapping, name: str, kind, source: str, path: str = '', required: bool = True):
    if not isinstance(data, Mapping):
        raise DocumentError("expected an object", _where(source, path))
    if name not in data:
        if required:
            raise DocumentError(f"missing field '{name}'", _where(source, path))
        return None
    value = data[name]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DocumentError(f"field '{name}' has the wrong type", _where(source, f"{path}/{name}"))
    return value


def _labels(values: List[Any], source: str, path: str) -> Tuple[str, ...]:
    for i, value in enumerate(values):
        if not isinstance(value, str) or not value:
            raise DocumentError("labels must be non-empty strings", _where(source, f"{path}/{i}"))
    if len(set(values)) != len(values):
        raise DocumentError("labels must be distinct", _where(source, path))
    return tuple(values)


def _lookup(index: Dict[str, int], label: Any, what: str, source: str, path: str) -> int:
    if not isinstance(label, str):
        raise DocumentError(f"{what} labels must be strings, got {label!r}", _where(source, path))
    if label not in index:
        raise DocumentError(f"unknown {what} label {label!r}", _where(source, path))
    return index[label]


def _per_label(raw: Any, labels: Tuple[str, ...], what: str, source: str, path: str) -> List[Any]:
    """Values given either as a list in label order or as an object keyed by label."""
    if isinstance(raw, list):
        if len(raw) != len(labels):
            raise DocumentError(f"expected {len(labels)} values, one per {what}", _where(source, path))
        return list(raw)
    if isinstance(raw, Mapping):
        index = {label: i for i, label in enumerate(labels)}
        values = [None] * len(labels)
        for label, value in raw.items():
            values[_lookup(index, label, what, source, f"{path}/{label}")] = value
        missing = [labels[i] for i, v in enumerate(values) if v is None]
        if missing:
            raise DocumentError(f"no value for {what} {missing[0]!r}", _where(source, path))
        return values
    raise DocumentError("expected a list or an object", _where(source, path))


def _numbers(raw: Any, labels: Tuple[str, ...], what: str, source: str, path: str) -> Tuple[float, ...]:
    values = _per_label(raw, labels, what, source, path)
    for label, value in zip(labels, values):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentError(f"expected a number, got {value!r}", _where(source, f"{path}/{label}"))
    return tuple(float(v) for v in values)


def _parse_capacity_entries(raw: Any, state_index: Dict[str, int], source: str) -> Dict[int, Any]:
    if not isinstance(raw, list):
        raise DocumentError("capacity must be a list of [states, level] entries", _where(source, '/capacity'))
    table: Dict[int, Any] = {}
    for i, entry in enumerate(raw):
        path = f"/capacity/{i}"
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list):
            raise DocumentError("capacity entry must be [[state labels...], level]", _where(source, path))
        mask = 0
        for label in entry[0]:
            mask |= 1 << _lookup(state_index, label, 'state', source, f"{path}/0")
        if mask in table:
            raise DocumentError("subset listed twice", _where(source, path))
        table[mask] = entry[1]
    return table


def parse_frame_document(data: Any, source: str = '<inline>', validate: bool = True) -> FrameDocument:
    """Build a FrameDocument; with ``validate=False`` an invalid capacity table is kept raw."""
    size = _field(data, 'scale', int, source)
    states = _labels(_field(data, 'states', list, source), source, '/states')
    outcomes = _labels(_field(data, 'outcomes', list, source), source, '/outcomes')
    try:
        scale = Scale(size)
    except QDTError as e:
        raise DocumentError(str(e), _where(source, '/scale'))
    mu = _per_label(data['mu'] if 'mu' in data else None, outcomes, 'outcome', source, '/mu')
    state_index = {label: i for i, label in enumerate(states)}
    n = len(states)

    capacity: Optional[Capacity] = None
    table = None
    kind = None
    pi = None
    if 'capacity' in data and 'possibility' in data:
        raise DocumentError("give either 'capacity' or 'possibility', not both", source)
    if 'capacity' in data:
        table = _parse_capacity_entries(data['capacity'], state_index, source)
        try:
            capacity = validate_capacity(table, n, scale)
        except CapacityError as e:
            if validate:
                raise DocumentError(str(e), _where(source, '/capacity'))
            logger.info(f"[parse_frame_document] keeping invalid capacity table of {source}: {e}")
    elif 'possibility' in data:
        possibility = _field(data, 'possibility', Mapping, source)
        kind = _field(possibility, 'kind', str, source, '/possibility')
        if kind not in (POSSIBILITY, NECESSITY):
            raise DocumentError(f"kind must be '{POSSIBILITY}' or '{NECESSITY}'", _where(source, '/possibility/kind'))
        values = _per_label(possibility.get('pi'), states, 'state', source, '/possibility/pi')
        try:
            pi = PossibilityDistribution(scale, tuple(values))
            capacity = possibility_capacity(pi) if kind == POSSIBILITY else necessity_capacity(pi)
        except QDTError as e:
            raise DocumentError(str(e), _where(source, '/possibility/pi'))

    try:
        frame = DecisionFrame(n, scale, tuple(mu), capacity, states, outcomes)
    except QDTError as e:
        raise DocumentError(str(e), _where(source, '/mu'))

    declared: Dict[str, Act] = {}
    acts = _field(data, 'acts', Mapping, source, required=False) or {}
    outcome_index = {label: i for i, label in enumerate(outcomes)}
    for name, labels in acts.items():
        path = f"/acts/{name}"
        if not isinstance(labels, list) or len(labels) != n:
            raise DocumentError(f"an act lists {n} outcome labels, one per state", _where(source, path))
        if ',' in name:
            raise DocumentError("act names may not contain ','", _where(source, path))
        declared[name] = tuple(_lookup(outcome_index, label, 'outcome', source, f"{path}/{i}")
                               for i, label in enumerate(labels))
    doc = FrameDocument(frame, declared, table, kind, pi, source)
    logger.info(f"[parse_frame_document] {source}: {n} states, {len(outcomes)} outcomes, scale {size}")
    return doc


def load_frame_document(path: str, validate: bool = True) -> FrameDocument:
    return parse_frame_document(read_json(path), path, validate)


def resolve_act(doc: FrameDocument, reference: str) -> Act:
    if not isinstance(reference, str):
        raise DocumentError(f"an act reference must be a string, got {reference!r}")
    if reference in doc.acts:
        return doc.acts[reference]
    labels = [part.strip() for part in reference.split(',')]
    frame = doc.frame
    if len(labels) != frame.state_count:
        raise DocumentError(f"act {reference!r} is neither a declared act nor {frame.state_count} outcome labels")
    index = {label: i for i, label in enumerate(frame.outcome_labels)}
    missing = [label for label in labels if label not in index]
    if missing:
        raise DocumentError(f"unknown outcome label {missing[0]!r} in act {reference!r}")
    return tuple(index[label] for label in labels)


def act_reference(doc: FrameDocument, act: Act) -> str:
    """Declared name of the act if it has one, else its comma-joined outcome labels."""
    for name, declared in doc.acts.items():
        if declared == tuple(act):
            return name
    return ','.join(doc.frame.outcome_labels[x] for x in act)


def subset_labels(frame: DecisionFrame, mask: int) -> List[str]:
    return [frame.state_labels[s] for s in mask_states(mask, frame.state_count)]


def serialize_frame_document(doc: FrameDocument) -> Dict[str, Any]:
    frame = doc.frame
    data: Dict[str, Any] = {
        'scale': frame.scale.size,
        'states': list(frame.state_labels),
        'outcomes': list(frame.outcome_labels),
        'mu': {label: level for label, level in zip(frame.outcome_labels, frame.mu)},
    }
    if doc.pi is not None:
        data['possibility'] = {
            'kind': doc.possibility_kind,
            'pi': {label: level for label, level in zip(frame.state_labels, doc.pi.values)},
        }
    elif doc.capacity_table is not None:
        data['capacity'] = [[subset_labels(frame, mask), doc.capacity_table[mask]]
                            for mask in sorted(doc.capacity_table)]
    elif frame.capacity is not None:
        data['capacity'] = [[subset_labels(frame, mask), level] for mask, level in enumerate(frame.capacity.table)]
    if doc.acts:
        data['acts'] = {name: [frame.outcome_labels[x] for x in act] for name, act in doc.acts.items()}
    return data


def parse_relation_document(data: Any, source: str = '<inline>') -> RelationDocument:
    if not isinstance(data, Mapping) or 'frame' not in data:
        raise DocumentError("missing field 'frame'", source)
    frame_ref = None
    if isinstance(data['frame'], str):
        frame_ref = data['frame']
        base = os.path.dirname(source) if source != '<inline>' else ''
        frame_doc = load_frame_document(os.path.join(base, frame_ref))
    elif isinstance(data['frame'], Mapping):
        frame_doc = parse_frame_document(data['frame'], f"{source}#/frame")
    else:
        raise DocumentError("field 'frame' must be a path or an object", _where(source, '/frame'))

    if ('ranks' in data) == ('induce' in data):
        raise DocumentError("give exactly one of 'ranks' and 'induce'", source)
    if 'induce' in data:
        induce = data['induce']
        if induce == INDUCE_CAPACITY:
            if frame_doc.frame.capacity is None:
                raise DocumentError("the frame carries no capacity to induce from", _where(source, '/induce'))
            return RelationDocument(frame_doc, frame_ref, induce=induce, source=source)
        if induce == INDUCE_EXPECTED_UTILITY:
            probabilities = _numbers(data.get('probabilities'), frame_doc.frame.state_labels, 'state',
                                     source, '/probabilities')
            payoffs = None
            if 'payoffs' in data:
                payoffs = _numbers(data['payoffs'], frame_doc.frame.outcome_labels, 'outcome', source, '/payoffs')
            return RelationDocument(frame_doc, frame_ref, induce=induce, probabilities=probabilities,
                                    payoffs=payoffs, source=source)
        raise DocumentError(f"unknown directive {induce!r}", _where(source, '/induce'))

    ranks = _field(data, 'ranks', Mapping, source)
    space = frame_act_space(frame_doc.frame)
    seen: Dict[int, str] = {}
    for reference, rank in ranks.items():
        path = f"/ranks/{reference}"
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
            raise DocumentError("rank must be a non-negative integer", _where(source, path))
        try:
            act = space.index(resolve_act(frame_doc, reference))
        except DocumentError as e:
            raise DocumentError(str(e), _where(source, path))
        if act in seen:
            raise DocumentError(f"act already ranked as {seen[act]!r}", _where(source, path))
        seen[act] = reference
    if frame_doc.acts:
        declared = {space.index(act) for act in frame_doc.acts.values()}
        if set(seen) != declared:
            raise DocumentError("ranks must cover the declared acts exactly", _where(source, '/ranks'))
    return RelationDocument(frame_doc, frame_ref, ranks=dict(ranks), source=source)


def load_relation_document(path: str) -> RelationDocument:
    return parse_relation_document(read_json(path), path)


def serialize_relation_document(doc: RelationDocument) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        'frame': doc.frame_ref if doc.frame_ref is not None else serialize_frame_document(doc.frame_document),
    }
    if doc.induce is not None:
        data['induce'] = doc.induce
        if doc.probabilities is not None:
            data['probabilities'] = list(doc.probabilities)
        if doc.payoffs is not None:
            data['payoffs'] = dict(zip(doc.frame.outcome_labels, doc.payoffs))
    else:
        data['ranks'] = dict(doc.ranks)
    return data


def dump_document(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2) + '\n'
