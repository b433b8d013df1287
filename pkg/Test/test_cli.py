"""
Command line, analysis pipelines and report rendering
"""
import json

import pytest

from app import create_analyzer
from app.controllers.cli_controller import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from app.models.report import AnalysisReport
from app.utils import render_text


def run(capsys, *argv):
    code = main(list(argv) + ['--env', 'testing'])
    return code, capsys.readouterr().out


def test_period_command(capsys):
    code, out = run(capsys, 'period', '--params', 'period8_lyness', '--json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['period'] == 8
    assert data['schema'] == 1
    assert data['errors'] == []
    assert 'timing' not in data


def test_usage_errors(capsys):
    assert main(['bogus']) == EXIT_USAGE
    assert main(['period', '--env', 'testing']) == EXIT_USAGE
    assert main(['period', '--params', 'no_such_fixture', '--env', 'testing']) == EXIT_USAGE
    assert main(['period', '--json', '--text']) == EXIT_USAGE


def test_degenerate_file_fails(capsys, tmp_path):
    path = tmp_path / 'flat.json'
    path.write_text(json.dumps({'alpha': [1, 2, 3, 4], 'beta': [1, 0, 0, 0]}))
    code, _ = run(capsys, 'period', '--params', str(path))
    assert code == EXIT_FAILURE


def test_signature_text(capsys):
    code, out = run(capsys, 'signature', '--params', 'period8_lyness')
    assert code == EXIT_OK
    assert out.startswith('command: signature')
    assert "'N': 5" in out
    assert 'duality' in out and 'PASS' in out


def test_noncritical_signature_reports_error(capsys):
    code, out = run(capsys, 'signature', '--params', 'noncritical_alpha2_zero', '--json')
    assert code == EXIT_FAILURE
    assert 'DegenerateParameters' in json.loads(out)['errors'][0]


def test_rotor_ledger(capsys):
    code, out = run(capsys, 'rotor', '--ledger', 'rotor_generic', '--json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['rotor']['verdict']['verdict'] == 'NotConjugate'
    names = {c['name']: c['passed'] for c in data['checks']}
    assert names['charpoly_matches'] and names['verdict_matches'] and names['stability_C1']


def test_charpoly_command(capsys):
    code, out = run(capsys, 'charpoly', '--params', 'period8_cl', '--json')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['growth']['kind'] == 'periodic'
    assert data['growth']['order'] == 8
    assert data['dynamical_degree']['cyclotomic_only']


def test_degrees_command(capsys):
    code, out = run(capsys, 'degrees', '--params', 'period8_lyness', '--nmax', '8', '--json')
    assert code == EXIT_OK
    degrees = json.loads(out)['degrees']
    assert degrees['degrees'] == degrees['predicted']


@pytest.mark.slow
def test_analyze_lyness(capsys):
    code, out = run(capsys, 'analyze', '--params', 'lyness', '--json', '--pmax', '6')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['signature']['N'] == 10
    assert data['signature']['m_s'] == 3
    assert data['growth']['kind'] == 'quadratic'
    assert 'period' not in data


def test_analyze_noncritical():
    analyzer = create_analyzer('testing')
    report = analyzer.analyze(analyzer.repository.load_parameters('noncritical_beta1_zero'))
    data = report.to_dict(include_timing=True)
    assert data['classification']['tag'] == 'NonCritical'
    assert data['certificate']['case'] == 'beta1_zero_beta3_beta2_nonzero'
    assert 'timing' in data


@pytest.mark.slow
def test_quick_selftest():
    report = create_analyzer('testing').selftest(quick=True)
    failed = [c for c in report.checks if not c['passed']]
    assert not failed
    names = [c['name'] for c in report.checks]
    assert 'period_12_half' not in names
    assert 'ledger_rotor_one' in names
    assert {'invariant_quartics', 'singular_points'} <= set(names)
    assert 'curve_intersections' not in names and 'restriction_lyness' not in names
    ledger_details = {c['name']: c['detail'] for c in report.checks}
    assert 'degrees [3, 8, 20, 45]' in ledger_details['ledger_rotor_omega']


def test_report_rendering():
    report = AnalysisReport('charpoly', bracket_polynomial=[1, 0, -1, 0, 1, 0, -1])
    report.add_check('determinant_identity', True)
    report.add_check('duality', False, 'N differs')
    assert not report.ok
    text = render_text(report.to_dict())
    assert 'FAIL' in text and 'PASS' in text
    assert 'bracket polynomial:' in text
    report.errors.append('signature: NonClosing')
    assert 'error: signature: NonClosing' in render_text(report.to_dict())
