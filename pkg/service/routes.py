import logging

from flask import jsonify, request

from qualitative_decision.documents import parse_frame_document, parse_relation_document, resolve_act
from qualitative_decision.evaluate import OPTIMISTIC, PESSIMISTIC
from qualitative_decision.exceptions import DocumentError
from qualitative_decision.preference import AxiomId
from qualitative_decision.reports import (
    ALL_METHODS,
    axioms_report,
    capacity_report,
    eu_demo_report,
    eval_report,
    synthesis_report,
)
from qualitative_decision.synthesis import GENERAL

logger = logging.getLogger(__name__)


def _payload() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise DocumentError('Request body must be a JSON object')
    return data


def _required(data: dict, name: str):
    if name not in data:
        raise DocumentError(f"missing field '{name}'", 'request')
    return data[name]


def init_routes(app):
    @app.route('/api/eval', methods=['POST'])
    def evaluate_acts():
        data = _payload()
        doc = parse_frame_document(_required(data, 'frame'), 'request#/frame')
        refs = data.get('acts')
        if refs is not None and not isinstance(refs, list):
            raise DocumentError("'acts' must be a list of act references", 'request#/acts')
        acts = None if refs is None else [resolve_act(doc, ref) for ref in refs]
        report = eval_report(doc, acts, data.get('method', ALL_METHODS))
        logger.info(f"[evaluate_acts] {len(report['results'])} acts")
        return jsonify(report), 200

    @app.route('/api/check-capacity', methods=['POST'])
    def check_capacity():
        data = _payload()
        doc = parse_frame_document(_required(data, 'frame'), 'request#/frame', validate=False)
        return jsonify(capacity_report(doc)), 200

    @app.route('/api/check-axioms', methods=['POST'])
    def check_axioms():
        data = _payload()
        relation = _required(data, 'relation')
        if isinstance(relation, dict) and isinstance(relation.get('frame'), str):
            raise DocumentError('the relation must carry its frame inline', 'request#/relation/frame')
        doc = parse_relation_document(relation, 'request#/relation')
        names = data.get('axioms', 'all')
        if names == 'all':
            axioms = list(AxiomId)
        elif isinstance(names, list):
            axioms = [AxiomId.parse(name) for name in names]
        else:
            raise DocumentError("'axioms' must be a list of names or 'all'", 'request#/axioms')
        report = axioms_report(doc, doc.relation(), axioms, bool(data.get('null_events', False)))
        logger.info(f"[check_axioms] {len(axioms)} axioms, holds={report['holds']}")
        return jsonify(report), 200

    @app.route('/api/synthesize', methods=['POST'])
    def synthesize():
        data = _payload()
        relation = _required(data, 'relation')
        if isinstance(relation, dict) and isinstance(relation.get('frame'), str):
            raise DocumentError('the relation must carry its frame inline', 'request#/relation/frame')
        mode = data.get('mode', GENERAL)
        if mode not in (GENERAL, OPTIMISTIC, PESSIMISTIC):
            raise DocumentError(f"unknown mode {mode!r}", 'request#/mode')
        doc = parse_relation_document(relation, 'request#/relation')
        return jsonify(synthesis_report(doc, doc.relation(), mode)), 200

    @app.route('/api/counterexample/eu-rcd', methods=['GET'])
    def eu_counterexample():
        return jsonify(eu_demo_report()), 200
