"""
Plane rotor maps, blowup ledgers and the automorphism verdict
"""
import pytest

from app.algebra.polynomial import coordinate_vars
from app.algebra.univariate import IntPoly
from app.exceptions import InconsistentLedger, UnsupportedConfiguration
from app.models.birational_map import BirationalMap
from app.models.pic_action import GrowthClass, GrowthKind
from app.models.plane_ledger import LedgerCurve, LedgerPoint, PlaneLedger
from app.services.birmap_service import apply_to_univariate
from app.services.planar_service import (
    HITS_INDETERMINACY, OMEGA, OPEN, PERIODIC, PlanarService, proportional, rotor_curves, same_point,
)

LEDGERS = ['ledger_rotor_generic', 'ledger_rotor_omega', 'ledger_rotor_omega2', 'ledger_rotor_i',
           'ledger_rotor_z6', 'ledger_rotor_one', 'ledger_lyness_rotor']


@pytest.fixture
def rotor(planar):
    return planar.rotor_map(2)


# ---- maps and curves ---------------------------------------------------------------

def test_rotor_map_degrees(planar, rotor):
    assert rotor.degree == 3
    assert rotor.nvars == 3
    assert planar.rotor_map(OMEGA * OMEGA).degree == 2
    assert planar.cube_root_rotor().degree == 2


def test_rotor_degree_sequence(planar, rotor):
    assert planar.plane_degrees(rotor, 3).degrees == [3, 8, 21]


def test_indeterminacy_of_quadratic_rotors(planar):
    lyness = planar.lyness_rotor(3)
    for point in ([0, 1, -1], [1, 0, -3], [1, -1, 0]):
        assert not any(lyness(point))
    cube = planar.cube_root_rotor()
    w2 = OMEGA * OMEGA
    for point in ([1, 0, 0], [1, -w2, 0], [0, -w2, 1]):
        assert not any(cube(point))


def test_parametrized_conic_lies_on_curve(planar):
    curve = rotor_curves(2)['C4']
    values = apply_to_univariate([curve], planar.parametrize(curve))
    assert not values[0]


def test_exceptional_curves_of_rotor(planar, rotor):
    results = {r['curve']: r for r in planar.plane_exceptional_verify(rotor, rotor_curves(2))}
    assert all(r['verified'] for r in results.values())
    w2 = OMEGA * OMEGA
    assert same_point(results['C1']['image'], [0, 1, 0])
    assert same_point(results['C2']['image'], [0, 1, -2 * OMEGA])
    assert same_point(results['C3']['image'], [1, -w2, 0])
    assert same_point(results['C4']['image'], [1, 0, -w2])


def test_coordinate_line_is_not_exceptional(planar, rotor):
    x0 = coordinate_vars(3)[0]
    entry = planar.plane_exceptional_verify(rotor, {'L0': x0})[0]
    assert not entry['verified']
    assert entry['residue']


# ---- orbits --------------------------------------------------------------------------

def test_three_cycle(planar, rotor):
    orbit = planar.plane_point_orbit(rotor, [0, 1, -2 * OMEGA])
    assert orbit.tag == PERIODIC
    assert orbit.period == 3
    assert same_point(orbit.points[1], [0, 1, -2])
    assert same_point(orbit.points[2], [0, 1, -2 * OMEGA * OMEGA])


def test_c1_meets_indeterminacy(planar, rotor, ledger):
    orbit = planar.curve_orbit(rotor, 'C1', rotor_curves(2)['C1'], ledger=ledger('ledger_rotor_generic'))
    assert orbit.tag == HITS_INDETERMINACY
    assert orbit.step == 1
    assert orbit.blown_up == 'E1'


def test_c3_orbit_is_open(planar, rotor):
    orbit = planar.curve_orbit(rotor, 'C3', rotor_curves(2)['C3'], n_max=4)
    assert orbit.tag == OPEN
    w2 = OMEGA * OMEGA
    ratio = OMEGA / 2
    for j, point in enumerate(orbit.points, start=1):
        assert same_point(point, [1, -w2 * ratio ** (j - 1), 0])


def test_curve_orbit_needs_exceptional_curve(planar, rotor):
    with pytest.raises(UnsupportedConfiguration):
        planar.curve_orbit(rotor, 'L0', coordinate_vars(3)[0])


# ---- ledgers ---------------------------------------------------------------------------

@pytest.mark.parametrize('name', LEDGERS)
def test_ledger_analysis(planar, ledger, name):
    data = ledger(name)
    report = planar.analyze_ledger(data, n_max=4)
    assert report['charpoly_matches']
    assert report['verdict']['verdict'] == data.expected_verdict
    assert all(w['ok'] for w in report.get('stability', []))
    assert report.get('degrees', {'agree': True})['agree']


def test_omega_ledger_matches_iterates(planar, picard, ledger):
    data = ledger('ledger_rotor_omega')
    check = planar.degree_check(planar.map_for(data), data, 4)
    assert check['symbolic'] == check['predicted'] == [3, 8, 20, 45]
    action = planar.plane_pic_matrix(data)
    factors = IntPoly.from_high([1, -1, -2, -1]) * IntPoly.from_high([1, -2, 1]) * IntPoly.from_high([1, 0, 0])
    assert picard.char_poly_det(action) == factors
    assert picard.growth_class(action).kind == GrowthKind.EXPONENTIAL


def test_omega_squared_rotor_is_quadratic_of_order_three(planar, picard, ledger):
    x0, x1, x2 = coordinate_vars(3)
    w2 = OMEGA * OMEGA
    g = planar.rotor_map(w2)
    expected = BirationalMap((x0 * (x0 + x2 * w2) * OMEGA, x1 * (x0 + x2), x2 * (x0 + x2 * w2)))
    assert proportional(g, expected)
    assert planar.plane_degrees(g, 3).degrees == [2, 2, 1]
    data = ledger('ledger_rotor_omega2')
    action = planar.plane_pic_matrix(data)
    assert planar.form_check(action)['preserved']
    growth = picard.growth_class(action)
    assert growth.kind == GrowthKind.PERIODIC and growth.order == 3


def test_rotor_at_one_has_order_three(planar, ledger):
    g = planar.rotor_map(1)
    assert planar.plane_degrees(g, 3).degrees == [3, 3, 1]
    start = [1, 2, 1]
    point = start
    for _ in range(3):
        point = g(point)
    assert same_point(point, start)
    assert planar.degree_check(g, ledger('ledger_rotor_one'), 3)['agree']


def test_generic_theta_squared(planar, ledger):
    theta = planar.theta_squared(ledger('ledger_rotor_generic'))
    assert theta['expression'] == '3*lam - 2'
    assert abs(theta['value'] - 5.854102) < 1e-5
    assert theta['nonzero']


def test_automorphism_ledger_preserves_form(planar, picard, ledger):
    action = planar.plane_pic_matrix(ledger('ledger_rotor_one'))
    assert planar.form_check(action)['preserved']
    growth = picard.growth_class(action)
    assert growth.kind == GrowthKind.PERIODIC
    assert growth.order == 3
    assert planar.theta_squared(ledger('ledger_rotor_one')) is None
    generic = planar.form_check(planar.plane_pic_matrix(ledger('ledger_rotor_generic')))
    assert not generic['preserved']


def test_degree_check(planar, rotor, ledger):
    check = planar.degree_check(rotor, ledger('ledger_rotor_generic'), 3)
    assert check == {'symbolic': [3, 8, 21], 'predicted': [3, 8, 21], 'agree': True}


def test_intersection_form(ledger):
    data = ledger('ledger_rotor_generic')
    assert PlanarService.intersection(data, [1, 0], [1, 0]) == 1
    assert PlanarService.intersection(data, [0, 1], [0, 1]) == -1
    assert PlanarService.intersection(data, [3, -1], [1, 0]) == 3


def test_verdicts_by_growth():
    assert not PlanarService.automorphism_verdict(GrowthClass(GrowthKind.LINEAR)).possible
    quadratic = PlanarService.automorphism_verdict(GrowthClass(GrowthKind.QUADRATIC))
    assert quadratic.possible and quadratic.note
    periodic = PlanarService.automorphism_verdict(GrowthClass(GrowthKind.PERIODIC, order=3))
    assert periodic.label == 'ConjugateToAutomorphismPossible'


def test_stability_witness_rejects_wrong_point(planar, rotor):
    x0, x1, x2 = coordinate_vars(3)
    bad = PlaneLedger('bad', ['H', 'E1'], {'H': {'H': 3, 'E1': -1}, 'E1': {'H': 1}},
                      points=[LedgerPoint('E1', [1, 0, 0])],
                      curves=[LedgerCurve('C1', rotor_curves(2)['C1'], ['E1'])])
    witness = planar.stability_witness(rotor, bad)
    assert witness[0]['curve'] == 'C1'
    assert not witness[0]['ok']


def test_inconsistent_ledgers():
    rules = {'H': {'H': 3, 'E1': -1}, 'E1': {'H': 1}}
    line = coordinate_vars(3)[0]
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['E1', 'H'], rules)
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['H', 'H'], {'H': {'H': 1}})
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['H', 'E1'], dict(rules, E9={'H': 1}))
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['H', 'E1'], {'H': {'H': 3, 'E2': -1}, 'E1': {'H': 1}})
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['H', 'E1'], {'H': {'H': 3}})
    with pytest.raises(InconsistentLedger):
        PlaneLedger('x', ['H', 'E1'], rules, curves=[LedgerCurve('C1', line, ['E1'])])


def test_map_for_unknown_kind(planar):
    ledger = PlaneLedger('x', ['H'], {'H': {'H': 1}}, kind='quintic')
    with pytest.raises(InconsistentLedger):
        planar.map_for(ledger)
