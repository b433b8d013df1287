"""
Orbit signatures of the exceptional surface, certificates and rotor curves
"""
import pytest

from app.exceptions import DegenerateParameters, InconsistentSignature, NonClosing, UnsupportedConfiguration
from app.models.orbit import EventTag, OrbitSignature
from app.models.parameters import MapParameters
from app.services.orbit_service import OrbitService


@pytest.mark.parametrize('name, N, d, u, m_s', [
    ('period8_lyness', 5, [2], [3], None),
    ('period8_cl', 3, [], [], None),
    ('period12_half', 4, [], [], None),
    ('period12_eta', 6, [2], [4], None),
    ('lyness', 10, [], [], 3),
])
def test_signatures(orbit, load, name, N, d, u, m_s):
    sig = orbit.gamma_orbit_signature(load(name))
    assert (sig.N, sig.d_list, sig.u_list, sig.m_s) == (N, d, u, m_s)
    assert sig.trace[-1].tag == EventTag.TERMINATE


def test_signature_events(orbit, load):
    sig = orbit.gamma_orbit_signature(load('lyness'))
    tags = [e.tag for e in sig.trace]
    assert tags[4] == EventTag.ENTER_SPECIAL_FIBER
    assert sig.to_dict()['m_s'] == 3
    assert orbit.gamma_orbit_signature(load('period8_lyness')).to_dict()['m_s'] == 'infinite'


def test_signature_normalizes_first(orbit, birmap, load):
    moved = birmap.apply_conjugacy(load('period8_lyness'), lam=3, c=-2, mu=5)
    assert not moved.is_normalized()
    assert orbit.gamma_orbit_signature(moved).N == 5


@pytest.mark.slow
def test_rotor_and_fifth_root_signatures(orbit, load):
    rotor = orbit.gamma_orbit_signature(load('rotor_a2'))
    assert (rotor.N, rotor.m, rotor.m_s) == (11, 0, None)
    assert orbit.gamma_orbit_signature(load('fifth_root')).N == 19


def test_noncritical_has_no_signature(orbit, load):
    with pytest.raises(DegenerateParameters):
        orbit.gamma_orbit_signature(load('noncritical_alpha2_zero'))


def test_short_cap_does_not_close(orbit, load):
    with pytest.raises(NonClosing):
        orbit.gamma_orbit_signature(load('lyness'), n_max=4)


def test_signature_shape_rules():
    OrbitSignature(5, [2], [3]).validate()
    with pytest.raises(InconsistentSignature):
        OrbitSignature(1).validate()
    with pytest.raises(InconsistentSignature):
        OrbitSignature(6, [3], [2]).validate()
    with pytest.raises(InconsistentSignature):
        OrbitSignature(6, [2], [3, 4]).validate()
    with pytest.raises(InconsistentSignature):
        OrbitSignature(8, [4], [6], m_s=3).validate()


def test_duality_rule():
    sig = OrbitSignature(5, [2], [3])
    assert OrbitService.duality_check(sig, OrbitSignature(5, [2], [3]))
    assert not OrbitService.duality_check(sig, OrbitSignature(5, [2], [4]))
    assert not OrbitService.duality_check(sig, OrbitSignature(6, [2], [3]))


def test_duality_of_period_eight(orbit, load):
    params = load('period8_lyness')
    assert orbit.duality_check(orbit.gamma_orbit_signature(params), orbit.inverse_signature(params))


def test_closure_search(orbit, load):
    found = orbit.closure_search(8, [load('period8_lyness'), load('lyness')])
    assert [sig.N for _, sig in found] == [5]


# ---- non-critical certificates ---------------------------------------------------

def test_linear_certificate(orbit):
    cert = orbit.noncritical_certificate(MapParameters.of((1, 2, 0, 0), (0, 1, 0, 0)))
    assert cert.closure == 'linear'
    assert cert.to_dict()['map'] == 'forward'


@pytest.mark.parametrize('name, case, inverse, period', [
    ('noncritical_alpha2_zero', 'alpha2_zero', True, 2),
    ('noncritical_beta1_zero', 'beta1_zero_beta3_beta2_nonzero', False, 3),
])
def test_certificates(orbit, load, name, case, inverse, period):
    cert = orbit.noncritical_certificate(load(name))
    assert cert.case == case
    assert cert.inverse == inverse
    assert cert.closure == 'cycle'
    assert cert.period == period
    assert cert.avoids_indeterminacy
    assert len(cert.trace) == 5
    data = cert.to_dict()
    assert data['case'] == cert.case
    assert len(data['trace']) == len(cert.trace)


def test_certificate_needs_noncritical(orbit, load):
    with pytest.raises(DegenerateParameters):
        orbit.noncritical_certificate(load('lyness'))


# ---- rotor ------------------------------------------------------------------------

def test_rotor_genericity(orbit, load, omega):
    with pytest.raises(UnsupportedConfiguration):
        orbit.rotor_orbit(load('cube_root'))
    with pytest.raises(UnsupportedConfiguration):
        orbit.rotor_orbit(MapParameters.of((1, 0, omega, 1), (0, 1, 0, 0)))
    with pytest.raises(UnsupportedConfiguration):
        orbit.rotor_orbit(MapParameters.of((2, 0, 3, 1), (0, 1, 0, 0)))
    with pytest.raises(UnsupportedConfiguration):
        orbit.rotor_orbit(load('lyness'))


@pytest.mark.slow
def test_rotor_curve_intersections(orbit, load):
    gammas = orbit.rotor_orbit(load('rotor_a2'))
    assert len(gammas) == 11
    g = lambda j: gammas[j - 1]  # noqa: E731
    assert orbit.curve_intersections(g(1), g(9)) == 2
    assert orbit.curve_intersections(g(11), g(3)) == 2
    assert orbit.curve_intersections(g(11), g(10)) == 1
    assert orbit.curve_intersections(g(11), g(5)) == 1
    assert orbit.curve_intersections(g(11), g(9)) == 1
