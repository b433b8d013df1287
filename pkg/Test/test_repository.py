"""
Parameter files, ledger files and fixture lookup
"""
import json
from fractions import Fraction

import pytest

from app.exceptions import DegenerateParameters, InconsistentLedger, UsageError
from app.models.parameters import MapParameters
from app.repositories.parameter_repository import ParameterRepository


def test_list_fixtures(repository):
    fixtures = repository.list_fixtures()
    assert 'lyness' in fixtures['parameters']
    assert 'ledger_rotor_generic' in fixtures['ledgers']
    assert not set(fixtures['parameters']) & set(fixtures['ledgers'])


def test_resolve(repository):
    assert repository.resolve('lyness').endswith('lyness.json')
    assert repository.resolve('lyness.json').endswith('lyness.json')
    assert repository.resolve('rotor_generic', ledger=True).endswith('ledger_rotor_generic.json')
    with pytest.raises(UsageError):
        repository.resolve('no_such_fixture')


def test_cyclotomic_fixture(load, omega):
    params = load('rotor_a2')
    assert params.alpha[2] == omega
    assert params.order == 3
    assert params.is_critical() and params.is_normalized()


def test_all_bundled_parameters_load(repository):
    params = repository.load_all_parameters()
    assert len(params) == len(repository.list_fixtures()['parameters'])
    assert len(repository.load_all_ledgers()) == 7


def test_save_and_load(repository, tmp_path):
    params = MapParameters.of((Fraction(-1, 2), 0, -1, 1), (1, 1, 0, 0))
    path = repository.save_parameters(params, str(tmp_path / 'half.json'), name='half')
    with open(path) as fh:
        assert json.load(fh)['name'] == 'half'
    assert repository.load_parameters(path) == params


def test_malformed_files(repository, tmp_path):
    broken = tmp_path / 'broken.json'
    broken.write_text('{"alpha": [1, 0')
    with pytest.raises(UsageError):
        repository.load_parameters(str(broken))
    listed = tmp_path / 'list.json'
    listed.write_text('[1, 2, 3]')
    with pytest.raises(UsageError):
        repository.load_parameters(str(listed))
    flag = tmp_path / 'flag.json'
    flag.write_text(json.dumps({'alpha': [True, 0, 1, 1], 'beta': [0, 1, 0, 0]}))
    with pytest.raises(UsageError):
        repository.load_parameters(str(flag))


def test_degenerate_file(repository, tmp_path):
    path = tmp_path / 'flat.json'
    path.write_text(json.dumps({'alpha': [1, 2, 3, 4], 'beta': [1, 0, 0, 0]}))
    with pytest.raises(DegenerateParameters):
        repository.load_parameters(str(path))
    missing = tmp_path / 'missing.json'
    missing.write_text(json.dumps({'alpha': [1, 2, 3, 4]}))
    with pytest.raises(DegenerateParameters):
        repository.load_parameters(str(missing))


def test_ledger_curves_filled_from_label(ledger):
    data = ledger('rotor_generic')
    assert data.basis == ['H', 'E1']
    assert [c.label for c in data.curves] == ['C1', 'C2', 'C3', 'C4']
    assert data.curves[3].equation.total_degree() == 2
    assert data.point('E1').coordinates == [0, 1, 0]


def test_ledger_from_dict_errors():
    with pytest.raises(InconsistentLedger):
        ParameterRepository.ledger_from_dict({'name': 'x', 'basis': ['H']})
    with pytest.raises(InconsistentLedger):
        ParameterRepository.ledger_from_dict({
            'name': 'x', 'kind': 'lyness', 'basis': ['H', 'E'],
            'rules': {'H': {'H': 2, 'E': -1}, 'E': {'H': 1}},
            'points': [{'label': 'E', 'coordinates': [1, -1, 0]}],
            'curves': [{'label': 'L', 'orbit': ['E']}],
        })
