"""
Family maps, composition, degrees, periods and the parameter actions
"""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import coordinate_vars
from app.exceptions import DegenerateParameters, UnsupportedConfiguration
from app.models.parameters import MapParameters
from app.services.birmap_service import BirationalMapService
from app.services.planar_service import proportional, rotor_curves

small = st.integers(-5, 5)
nonzero = small.filter(bool)


def critical_params():
    return st.builds(
        lambda a0, a1, a2, a3, b0, b1: MapParameters.of((a0, a1, a2, a3), (b0, b1, 0, 0)),
        small, small, nonzero, nonzero, small, nonzero,
    )


def test_family_map_components(birmap, load):
    params = load('lyness')
    f = birmap.build_family_map(params)
    x0, x1, x2, x3 = coordinate_vars()
    assert f.degree == 2
    assert list(f.components) == [x0 * x1, x2 * x1, x3 * x1, x0 * (x0 * 3 + x2 + x3)]


def test_inverse_composes_to_identity(birmap, load):
    params = load('period8_lyness')
    f = birmap.build_family_map(params)
    g = birmap.build_family_inverse(params)
    assert birmap.compose_reduce(f, g, params).is_identity()
    assert birmap.compose_reduce(g, f, params).is_identity()


def test_degenerate_parameters_rejected():
    with pytest.raises(DegenerateParameters):
        MapParameters.of((1, 2, 3, 4), (1, 0, 0, 0))
    with pytest.raises(DegenerateParameters):
        MapParameters.of((1, 0, 3, 4), (1, 0, 2, 0))
    with pytest.raises(DegenerateParameters):
        MapParameters.of((2, 2, 2, 2), (1, 1, 1, 1))


def test_jacobian_factored_form(birmap):
    params = MapParameters.of((1, 2, 3, 4), (2, 1, 3, 5))
    report = birmap.factored_form(params)
    assert all(report.divisible_by.values())
    assert report.cofactor is not None and report.cofactor
    assert report.determinant.total_degree() == 4


def test_period_eight(birmap, load):
    for name in ('period8_lyness', 'period8_cl'):
        params = load(name)
        assert birmap.period_of(birmap.build_family_map(params), 16, params) == 8


@pytest.mark.slow
def test_period_twelve(birmap, load):
    for name in ('period12_half', 'period12_eta'):
        params = load(name)
        assert birmap.period_of(birmap.build_family_map(params), 16, params) == 12


def test_lyness_is_not_periodic(birmap, load):
    params = load('lyness')
    assert birmap.period_of(birmap.build_family_map(params), 12, params) is None


def test_period_eight_degrees_return_to_one(birmap, load):
    f = birmap.build_family_map(load('period8_lyness'))
    seq = birmap.iterate_degrees(f, 8)
    assert seq.degrees[0] == 2
    assert seq.degrees[7] == 1
    assert not seq.bound_exceeded


def test_recurrence_period():
    params = MapParameters.of((1, 0, 1, 1), (0, 1, 0, 0))
    assert BirationalMapService.recurrence_step(params, (2, 3, 5)) == Fraction(9, 2)


def test_recurrence_period_eight(birmap, load):
    assert birmap.recurrence_period(load('period8_lyness'), (2, 3, 5), 16) == 8


def test_recurrence_pole(birmap):
    params = MapParameters.of((1, 0, 1, 1), (0, 1, 0, 0))
    assert birmap.recurrence_step(params, (0, 1, 1)) is None


# ---- classification and conjugacy ----------------------------------------------

def test_classification_labels(birmap, load):
    assert birmap.classify_parameters(load('lyness')).critical
    assert birmap.classify_parameters(load('noncritical_alpha2_zero')).label == 'alpha2_zero'
    assert (birmap.classify_parameters(load('noncritical_beta1_zero')).label
            == 'beta1_zero_beta3_beta2_nonzero')
    linear = MapParameters.of((1, 2, 0, 0), (0, 1, 0, 0))
    assert birmap.classify_parameters(linear).label == 'linear'


@given(critical_params())
def test_normal_form(params):
    normalized, steps = BirationalMapService().normalize_critical(params)
    assert normalized.is_normalized()
    assert normalized.is_critical()
    assert [s.kind for s in steps] == ['scale', 'translate', 'diagonal', 'scale']


@given(critical_params(), small, small, small)
def test_translation_conjugates_recurrence(params, mu, z0, z1):
    moved = BirationalMapService.translate(params, mu)
    state = (z0, z1, 7)
    shifted = tuple(CycNum.coerce(z + mu) for z in state)
    before = BirationalMapService.recurrence_step(params, shifted)
    after = BirationalMapService.recurrence_step(moved, state)
    assert (before is None) == (after is None)
    if after is not None:
        assert after == before - mu


@given(critical_params(), nonzero, small, small)
def test_diagonal_conjugates_recurrence(params, c, z0, z1):
    scaled = BirationalMapService.diagonal(params, c)
    state = (z0, z1, 3)
    before = BirationalMapService.recurrence_step(params, tuple(CycNum.coerce(c * z) for z in state))
    after = BirationalMapService.recurrence_step(scaled, state)
    assert (before is None) == (after is None)
    if after is not None:
        assert after == before / c


def test_apply_conjugacy_keeps_criticality(birmap, load):
    params = load('lyness')
    moved = birmap.apply_conjugacy(params, lam=2, c=3, mu=Fraction(1, 2))
    assert moved.is_critical()
    assert birmap.normalize_critical(moved)[0].is_normalized()


def test_conjugate_inverse_params(birmap, load):
    inverse = birmap.conjugate_inverse_params(load('lyness'))
    assert inverse.is_normalized()
    with pytest.raises(DegenerateParameters):
        birmap.conjugate_inverse_params(load('noncritical_alpha2_zero'))


# ---- exceptional sets --------------------------------------------------------------

def test_generic_exceptional_images(birmap):
    params = MapParameters.of((1, 2, 3, 4), (2, 1, 3, 5))
    assert birmap.is_generic(params)
    assert all(r['verified'] for r in birmap.exceptional_images(params))
    sets = birmap.indeterminacy_sets(params)
    assert all(sets['forward'].values())
    assert all(sets['inverse'].values())


def test_e1_is_indeterminate(birmap, load):
    params = load('lyness')
    assert birmap.in_indeterminacy(params, (0, 1, 0, 0))
    assert birmap.in_indeterminacy(params, (0, 0, 0, 1), inverse=True)
    assert not birmap.in_indeterminacy(params, (1, 1, 1, 1))


@pytest.mark.slow
def test_rotor_restriction(birmap, planar, load):
    params = load('rotor_a2')
    g = birmap.restrict_to_plane(params)
    assert g.degree == 3
    verified = planar.plane_exceptional_verify(g, rotor_curves(2))
    assert all(v['verified'] for v in verified)


def test_lyness_rotor_is_the_cubic_rotor_at_w_one(planar, load):
    one = CycNum.coerce(1)
    assert proportional(planar.rotor_map(3, one), planar.lyness_rotor(3))
    assert proportional(planar.closed_form_for(load('lyness')), planar.lyness_rotor(3))
    assert proportional(planar.closed_form_for(load('cube_root')), planar.cube_root_rotor())


def test_closed_form_needs_rotor_parameters(planar, load):
    with pytest.raises(UnsupportedConfiguration):
        planar.closed_form_for(load('period8_cl'))


@pytest.mark.slow
@pytest.mark.parametrize('name, degree', [('rotor_a2', 3), ('lyness', 2), ('cube_root', 2)])
def test_restriction_matches_closed_form(planar, load, name, degree):
    check = planar.restriction_check(load(name))
    assert check['agree']
    assert check['restricted_degree'] == check['closed_degree'] == degree
