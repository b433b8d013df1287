"""
Pullback matrices, characteristic polynomials, growth and Salem tests
"""
import pytest
from hypothesis import given, strategies as st

from app.algebra.univariate import IntPoly
from app.models.orbit import OrbitSignature
from app.models.pic_action import GrowthKind, PicAction
from app.services.picard_service import PicardService, cyclotomic_part, irreducible_factors

PICY_CHARPOLY = IntPoly.from_high([1, 0, 0, -1, -1, -1])
ROTOR_FACTOR = IntPoly.from_high([1, 0, 0, -1, -1, -1, 0, 0, 1])

PERIOD8 = OrbitSignature(5, [2], [3])
LYNESS = OrbitSignature(10, [], [], 3)
ROTOR = OrbitSignature(11)


def test_picY_matrix(picard):
    action = picard.picY_matrix()
    assert action.labels == ['H', 'E1', 'S03', 'S01', 'E3']
    assert action.image('H') == {'H': 2, 'E1': -1, 'S01': -1, 'E3': -1}
    assert picard.char_poly_det(action).equal_up_to_sign(PICY_CHARPOLY)
    assert abs(picard.dynamical_degree(PICY_CHARPOLY).approx - 1.32472) < 1e-5


def test_picZ_shape(picard):
    action = picard.picZ_matrix(PERIOD8)
    assert action.size == 10
    assert action.labels[5:] == ['F5', 'F4', 'F3', 'F2', 'F1']
    assert picard.predicted_degrees(action, 1) == [2]


def test_pic_action_constructors():
    rows = PicAction.from_rows(['H', 'E1'], [[1, 2], [3, 4]])
    cols = PicAction.from_columns(['H', 'E1'], [[1, 3], [2, 4]])
    assert rows == cols
    assert rows.to_dict()['matrix'] == [[1, 2], [3, 4]]
    with pytest.raises(ValueError):
        PicAction.from_rows(['H'], [[1, 2], [3, 4]])


@pytest.mark.parametrize('signature, high', [
    (OrbitSignature(3), [1, 0, -1, 0, 1, 0, -1]),
    (ROTOR, [1, 0, -1, -1] + [0] * 7 + [1, 1, 0, -1]),
    (LYNESS, [1, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1, 1, 0, -1]),
])
def test_bracket_polynomials(signature, high):
    poly = PicardService.char_poly_bracket(signature)
    assert poly.degree() == signature.N + 3
    assert poly.equal_up_to_sign(IntPoly.from_high(high))


@pytest.mark.parametrize('seed', range(50))
def test_determinant_identity(picard, seed):
    signature = PicardService.signature_from_random(seed)
    result = picard.identity_check(signature)
    assert result['holds'], signature


@given(st.integers(0, 10 ** 6))
def test_determinant_identity_property(seed):
    signature = PicardService.signature_from_random(seed, n_max=16)
    assert PicardService().identity_check(signature)['holds']
    assert PicardService.char_poly_bracket(signature)(1) == 0


def test_rotor_dynamical_degree(picard):
    report = picard.dynamical_degree(PicardService.char_poly_bracket(ROTOR))
    assert abs(report.approx - 1.28064) < 1e-5
    assert report.factor.equal_up_to_sign(ROTOR_FACTOR)


def test_fifth_root_dynamical_degree(picard):
    report = picard.dynamical_degree(PicardService.char_poly_bracket(OrbitSignature(19)))
    assert abs(report.approx - 1.3211018) < 1e-6


def test_cyclotomic_only(picard):
    report = picard.dynamical_degree(PicardService.char_poly_bracket(OrbitSignature(3)))
    assert report.value is None and report.cyclotomic_only
    assert report.approx == 1.0


def test_factor_helpers():
    orders, rest = cyclotomic_part(PICY_CHARPOLY)
    assert orders == [4]
    assert rest.equal_up_to_sign(IntPoly.from_high([1, 0, -1, -1]))
    assert len(irreducible_factors(PICY_CHARPOLY)) == 2


# ---- growth ------------------------------------------------------------------------

@pytest.mark.parametrize('signature, order', [
    (OrbitSignature(3), 8),
    (OrbitSignature(4), 12),
    (PERIOD8, 8),
])
def test_periodic_matrices(picard, signature, order):
    growth = picard.growth_class(picard.picZ_matrix(signature))
    assert growth.kind == GrowthKind.PERIODIC
    assert growth.order == order


def test_lyness_growth_is_quadratic(picard):
    growth = picard.growth_class(picard.picZ_matrix(LYNESS))
    assert growth.kind == GrowthKind.QUADRATIC
    assert growth.jordan_block == 3


def test_rotor_growth_is_exponential(picard):
    growth = picard.growth_class(picard.picZ_matrix(ROTOR))
    assert growth.kind == GrowthKind.EXPONENTIAL
    assert abs(growth.delta.approx - 1.28064) < 1e-5
    assert growth.to_dict()['kind'] == 'exponential'


# ---- Salem -----------------------------------------------------------------------

def test_salem_verdicts(picard):
    verdict = picard.salem_verdict(PicardService.char_poly_bracket(ROTOR))
    assert verdict.is_salem
    assert verdict.factor.equal_up_to_sign(ROTOR_FACTOR)
    assert not picard.salem_verdict(IntPoly.from_high([1, -3, 1])).is_salem
    assert not picard.salem_verdict(IntPoly.from_high([1, -4, 3, 0, 1, -2, 1])).is_salem
    assert not picard.salem_verdict(IntPoly.from_high([1, 0, 0, 0, 1])).is_salem


# ---- degree prediction -------------------------------------------------------------

def test_period_eight_prediction_returns(picard):
    degrees = picard.predicted_degrees(picard.picZ_matrix(PERIOD8), 8)
    assert degrees[0] == 2
    assert degrees[7] == 1


def test_degree_recurrence_check():
    square = IntPoly([1, -2, 1])
    assert PicardService.degree_recurrence_check(square, [2, 3, 4, 5])
    assert not PicardService.degree_recurrence_check(square, [2, 3, 5])


@pytest.mark.slow
def test_lyness_prediction_matches_iterates(picard, birmap, load):
    predicted = picard.predicted_degrees(picard.picZ_matrix(LYNESS), 10)
    sequence = birmap.iterate_degrees(birmap.build_family_map(load('lyness')), 10)
    actual = sequence.degrees
    assert not sequence.bound_exceeded
    assert len(actual) == 10
    assert predicted == actual
    poly = picard.char_poly_det(picard.picZ_matrix(LYNESS))
    assert picard.degree_recurrence_check(poly, actual)
