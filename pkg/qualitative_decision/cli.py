import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from qualitative_decision.config import get_settings
from qualitative_decision.documents import load_frame_document, load_relation_document, resolve_act
from qualitative_decision.evaluate import OPTIMISTIC, PESSIMISTIC
from qualitative_decision.exceptions import DocumentError, QDTError, SynthesisError
from qualitative_decision.preference import AxiomId
from qualitative_decision.reports import (
    ALL_METHODS,
    METHODS,
    axioms_report,
    capacity_report,
    compare_report,
    eu_demo_report,
    eval_report,
    render_text,
    sure_thing_report,
    synthesis_report,
)
from qualitative_decision.synthesis import GENERAL

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _parse_axioms(text: str) -> List[AxiomId]:
    if text.strip().lower() == 'all':
        return list(AxiomId)
    return [AxiomId.parse(part) for part in text.split(',') if part.strip()]


def _parse_probabilities(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(',')]
    except ValueError:
        raise DocumentError(f"probabilities must be comma-separated numbers, got {text!r}", '--probabilities')


def cmd_eval(args) -> tuple:
    doc = load_frame_document(args.frame)
    acts = None if args.all or not args.act else [resolve_act(doc, ref) for ref in args.act]
    report = eval_report(doc, acts, args.method)
    return report, EXIT_OK if report['agree'] else EXIT_VIOLATION


def cmd_check_capacity(args) -> tuple:
    doc = load_frame_document(args.frame, validate=False)
    report = capacity_report(doc)
    return report, EXIT_OK if report['valid'] else EXIT_VIOLATION


def cmd_check_axioms(args) -> tuple:
    axioms = _parse_axioms(args.axioms)
    doc = load_relation_document(args.relation)
    report = axioms_report(doc, doc.relation(), axioms, args.null_events)
    return report, EXIT_OK if report['holds'] else EXIT_VIOLATION


def cmd_synthesize(args) -> tuple:
    doc = load_relation_document(args.relation)
    report = synthesis_report(doc, doc.relation(), args.mode)
    return report, EXIT_VIOLATION if report['refused'] else EXIT_OK


def cmd_counterexample(args) -> tuple:
    if args.kind == 'eu-rcd':
        report = eu_demo_report()
        return report, EXIT_VIOLATION if report['rcd_violation'] else EXIT_OK
    if args.frame is None:
        raise DocumentError("--kind surething needs a frame document")
    report = sure_thing_report(load_frame_document(args.frame))
    return report, EXIT_VIOLATION if report['found'] else EXIT_OK


def cmd_compare(args) -> tuple:
    doc = load_frame_document(args.frame)
    report = compare_report(doc, _parse_probabilities(args.probabilities))
    return report, EXIT_VIOLATION if report['divergent'] else EXIT_OK


def cmd_serve(args) -> tuple:
    from service.app import create_app

    create_app().run(host=args.host, port=args.port)
    return None, EXIT_OK


COMMANDS: Dict[str, Callable] = {
    'eval': cmd_eval,
    'check-capacity': cmd_check_capacity,
    'check-axioms': cmd_check_axioms,
    'synthesize': cmd_synthesize,
    'counterexample': cmd_counterexample,
    'compare': cmd_compare,
    'serve': cmd_serve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qualitative_decision',
                                     description='Qualitative decision making with Sugeno integrals')
    parser.add_argument('--json', action='store_true', help='Emit machine-readable JSON')
    parser.add_argument('--verbose', '-v', action='store_true', help='Log progress to standard error')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', help='Sugeno utilities of acts')
    p.add_argument('frame')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--act', action='append', help='Act name or comma-joined outcome labels (repeatable)')
    group.add_argument('--all', action='store_true', help='Every act of the act space')
    p.add_argument('--method', choices=list(METHODS) + [ALL_METHODS], default=ALL_METHODS)

    p = sub.add_parser('check-capacity', help='Validate and classify the capacity of a frame')
    p.add_argument('frame')

    p = sub.add_parser('check-axioms', help='Check axioms on a preference relation')
    p.add_argument('relation')
    p.add_argument('--axioms', default='all', help="Comma-separated axiom names or 'all'")
    p.add_argument('--null-events', action='store_true',
                   help='Also list events where nullity and indifference to the empty set disagree')

    p = sub.add_parser('synthesize', help='Extract a Sugeno representation from a relation')
    p.add_argument('relation')
    p.add_argument('--mode', choices=[GENERAL, OPTIMISTIC, PESSIMISTIC], default=GENERAL)

    p = sub.add_parser('counterexample', help='Sure-thing violation search or the expected-utility demo')
    p.add_argument('--kind', choices=['surething', 'eu-rcd'], required=True)
    p.add_argument('frame', nargs='?')

    p = sub.add_parser('compare', help='Sugeno against expected utility on one frame')
    p.add_argument('frame')
    p.add_argument('--probabilities', required=True, help='Comma-separated, one per state')

    p = sub.add_parser('serve', help='Start the HTTP service')
    p.add_argument('--host', default='127.0.0.1')
    p.add_argument('--port', type=int, default=5000)
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK

    try:
        level = 'INFO' if args.verbose else get_settings().log_level
        logging.basicConfig(level=level, stream=stderr, format='%(levelname)s %(name)s: %(message)s')
        report, status = COMMANDS[args.command](args)
    except SynthesisError as e:
        logger.error(f"[main] internal error: {str(e)}")
        print(f"internal error: {e}", file=stderr)
        return EXIT_ERROR
    except QDTError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_ERROR

    if report is not None:
        if args.json:
            stdout.write(json.dumps(report, sort_keys=True, indent=2) + '\n')
        else:
            stdout.write(render_text(report))
    return status


if __name__ == '__main__':
    sys.exit(main())
