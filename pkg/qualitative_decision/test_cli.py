import io
import json
import os

import pytest

from qualitative_decision.cli import EXIT_ERROR, EXIT_OK, EXIT_VIOLATION, main

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'fixtures')


def fixture(name):
    return os.path.join(FIXTURES, name)


def run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    status = main(list(argv), stdout=stdout, stderr=stderr)
    return status, stdout.getvalue(), stderr.getvalue()


def test_eval_named_act():
    status, out, _ = run('eval', fixture('frame_basic.json'), '--act', 'f')
    assert status == EXIT_OK
    assert out == 'f: levelcut=1 outcome=1 median=1\nagree\n'


def test_eval_all_acts_as_json():
    status, out, _ = run('--json', 'eval', fixture('frame_basic.json'), '--all', '--method', 'median')
    assert status == EXIT_OK
    report = json.loads(out)
    assert report['methods'] == ['median']
    values = {entry['act']: entry['median'] for entry in report['results']}
    assert len(values) == 9
    assert values['x_*,x_*'] == 0
    assert values['x^*,x^*'] == 2
    assert values['g'] == 1


def test_check_capacity():
    status, out, _ = run('check-capacity', fixture('frame_invalid_capacity.json'))
    assert status == EXIT_VIOLATION
    assert out.startswith('invalid:')
    status, out, _ = run('--json', 'check-capacity', fixture('frame_surething.json'))
    assert status == EXIT_OK
    report = json.loads(out)
    assert report['valid'] and not report['maxitive'] and not report['minitive']


def test_check_axioms_on_expected_utility():
    status, out, _ = run('check-axioms', fixture('relation_expected_utility.json'), '--axioms', 'RCD,WS3')
    assert status == EXIT_VIOLATION
    lines = out.splitlines()
    assert lines[0].startswith('RCD: fails f=')
    assert lines[1] == 'WS 3: holds'


def test_check_axioms_on_a_sugeno_relation():
    status, out, _ = run('check-axioms', fixture('relation_basic.json'), '--axioms', "Sav 4',RCD,RDD,CoD")
    assert status == EXIT_OK
    assert all(line.endswith('holds') for line in out.splitlines())


def test_unknown_axiom_is_an_input_error():
    status, _, err = run('check-axioms', fixture('relation_basic.json'), '--axioms', 'Sav 9')
    assert status == EXIT_ERROR
    assert 'unknown axiom' in err


def test_synthesize_general_and_possibilistic():
    status, out, _ = run('synthesize', fixture('relation_surething.json'))
    assert status == EXIT_OK
    assert out.rstrip().endswith('verified: yes')
    status, out, _ = run('synthesize', fixture('relation_surething.json'), '--mode', 'optimistic')
    assert status == EXIT_VIOLATION
    assert out.startswith('refused: DD fails')
    status, out, _ = run('--json', 'synthesize', fixture('relation_possibility.json'), '--mode', 'optimistic')
    assert status == EXIT_OK
    report = json.loads(out)
    assert report['verified']
    pi = report['pi']
    assert pi['s0'] > pi['s1'] > pi['s2']


def test_synthesize_refuses_expected_utility():
    status, out, _ = run('--json', 'synthesize', fixture('relation_expected_utility.json'))
    assert status == EXIT_VIOLATION
    report = json.loads(out)
    assert report['refused']
    assert report['verdict']['axiom'] == 'RCD'


def test_expected_utility_counterexample():
    status, out, _ = run('counterexample', '--kind', 'eu-rcd')
    assert status == EXIT_VIOLATION
    assert 'EU(f) = 930.14' in out
    assert 'EU(g) = 9.79' in out
    assert 'EU(f meet c) = 9.44' in out
    assert 'RDD violated: yes' in out


def test_sure_thing_counterexample():
    status, out, _ = run('counterexample', '--kind', 'surething', fixture('frame_surething.json'))
    assert status == EXIT_VIOLATION
    assert out.startswith('sure-thing violation: f=')
    status, _, err = run('counterexample', '--kind', 'surething')
    assert status == EXIT_ERROR
    assert 'needs a frame' in err


def test_compare_reports_divergence():
    status, out, _ = run('--json', 'compare', fixture('frame_basic.json'), '--probabilities', '0.5,0.5')
    report = json.loads(out)
    assert all(entry['holds'] for entry in report['checks']['sugeno'])
    assert status == (EXIT_VIOLATION if report['divergent'] else EXIT_OK)
    status, _, err = run('compare', fixture('frame_basic.json'), '--probabilities', '0.5,0.6')
    assert status == EXIT_ERROR


def test_budget_from_the_environment(monkeypatch):
    monkeypatch.setenv('QDT_BUDGET', '10')
    status, _, err = run('check-axioms', fixture('relation_basic.json'), '--axioms', 'CD')
    assert status == EXIT_ERROR
    assert '729' in err


def test_bad_configuration_is_reported(monkeypatch):
    monkeypatch.setenv('QDT_WORKERS', 'many')
    status, _, err = run('check-axioms', fixture('relation_basic.json'), '--axioms', 'CD')
    assert status == EXIT_ERROR
    assert 'QDT_WORKERS' in err


def test_missing_file_and_bad_json(tmp_path):
    status, _, err = run('eval', str(tmp_path / 'absent.json'), '--all')
    assert status == EXIT_ERROR
    broken = tmp_path / 'broken.json'
    broken.write_text('{"scale": 3,\n "states": }', encoding='utf-8')
    status, _, err = run('eval', str(broken), '--all')
    assert status == EXIT_ERROR
    assert 'broken.json:2:' in err


def test_usage_errors_exit_with_two():
    assert run('frobnicate')[0] == EXIT_ERROR
    assert run('eval')[0] == EXIT_ERROR


@pytest.mark.parametrize('argv', [
    ('check-axioms', 'relation_expected_utility.json'),
    ('check-capacity', 'frame_surething.json'),
    ('counterexample', '--kind', 'surething', 'frame_surething.json'),
])
def test_json_output_is_stable(argv):
    argv = [fixture(a) if a.endswith('.json') else a for a in argv]
    first = run('--json', *argv)
    second = run('--json', *argv)
    assert first[1] == second[1]
    assert first[0] == second[0]


def test_constant_act_evaluates_to_its_utility():
    status, out, _ = run('eval', fixture('frame_basic.json'), '--act', 'x,x')
    assert status == EXIT_OK
    assert out.startswith('g: levelcut=1 outcome=1 median=1')


def test_possibility_relation_is_optimistic():
    status, out, _ = run('check-axioms', fixture('relation_possibility.json'), '--axioms', 'DD,OPTIMISM')
    assert status == EXIT_OK
    assert out == 'DD: holds\nOptimism: holds\n'


def write_json(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


def test_non_numeric_probabilities_are_input_errors(tmp_path):
    with open(fixture('relation_expected_utility.json'), encoding='utf-8') as handle:
        relation = json.load(handle)
    relation['probabilities'] = ['a', 'b']
    status, out, err = run('check-axioms', write_json(tmp_path / 'relation.json', relation), '--axioms', 'RCD')
    assert status == EXIT_ERROR
    assert out == ''
    assert '#/probabilities/s0' in err
    relation['probabilities'] = [0.5, 0.5]
    relation['payoffs'] = {'2': 2, '3': None, '10': 10, '100': [100], '1000': 1000}
    status, _, err = run('check-axioms', write_json(tmp_path / 'relation.json', relation), '--axioms', 'RCD')
    assert status == EXIT_ERROR
    assert '#/payoffs' in err


def test_non_string_labels_are_input_errors(tmp_path):
    with open(fixture('frame_basic.json'), encoding='utf-8') as handle:
        frame = json.load(handle)
    frame['capacity'][1] = [[['s0']], 1]
    status, _, err = run('check-capacity', write_json(tmp_path / 'frame.json', frame))
    assert status == EXIT_ERROR
    assert '#/capacity/1/0' in err
    with open(fixture('frame_basic.json'), encoding='utf-8') as handle:
        frame = json.load(handle)
    frame['acts']['h'] = [1, 'x']
    status, _, err = run('eval', write_json(tmp_path / 'frame.json', frame), '--all')
    assert status == EXIT_ERROR
    assert '#/acts/h/0' in err


def test_null_event_discrepancies_are_listed_on_request():
    status, out, _ = run('--json', 'check-axioms', fixture('relation_surething.json'), '--axioms', 'RCD',
                         '--null-events')
    assert status == EXIT_OK
    events = json.loads(out)['null_event_discrepancies']
    assert events[0] == ['s0']
    assert len(events) == 8
    status, out, _ = run('check-axioms', fixture('relation_surething.json'), '--axioms', 'RCD', '--null-events')
    assert out.splitlines()[1].startswith('null events unlike the empty set: {s0} {s1} {s0,s1}')
    status, out, _ = run('--json', 'check-axioms', fixture('relation_surething.json'), '--axioms', 'RCD')
    assert 'null_event_discrepancies' not in json.loads(out)
