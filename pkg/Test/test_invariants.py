"""
Invariant quartics, multipliers, pencil rotations and singular points
"""
import pytest

from app.algebra.cycnum import CycNum
from app.algebra.linalg import rank
from app.algebra.polynomial import coordinate_vars
from app.algebra.univariate import UniPoly
from app.exceptions import UnsupportedConfiguration
from app.services.invariant_service import (
    cube_root_quartics, lyness_quartics, monomials, rotor_quartic, tetrahedron,
)


def in_span(p, basis):
    """p is a linear combination of basis"""
    monos = sorted({m for q in basis + [p] for m in q.terms})
    rows = [[q.terms.get(m, CycNum.coerce(0)) for m in monos] for q in basis]
    return rank(rows + [[p.terms.get(m, CycNum.coerce(0)) for m in monos]], len(monos)) == rank(rows, len(monos))


@pytest.fixture
def lyness_map(birmap, load):
    return birmap.build_family_map(load('lyness'))


def test_monomial_basis():
    assert len(monomials(4, 4)) == 35
    assert monomials(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_lyness_quartics_are_invariant(invariants, lyness_map):
    q0, q1, q2 = lyness_quartics(3)
    t = invariants.multiplier_of(lyness_map, q0)
    assert invariants.multiplier_of(lyness_map, q1) == t
    assert invariants.multiplier_of(lyness_map, q2) == t
    assert invariants.pencil_action(lyness_map, q0, q1).is_one()


@pytest.mark.slow
def test_lyness_kernel_contains_the_pencil(invariants, lyness_map):
    quartics = lyness_quartics(3)
    solution = invariants.solution(lyness_map, 4, invariants.multiplier_of(lyness_map, quartics[0]))
    assert solution.dimension >= 3
    assert all(in_span(q, solution.basis) for q in quartics)
    assert solution.to_dict()['dimension'] == solution.dimension


def test_non_solution_is_rejected(invariants, lyness_map):
    x0 = coordinate_vars()[0]
    with pytest.raises(UnsupportedConfiguration):
        invariants.multiplier_of(lyness_map, x0 ** 4)


def test_cube_root_pencil_rotates(invariants, birmap, load, omega):
    f = birmap.build_family_map(load('cube_root'))
    r0, r1, r2 = cube_root_quartics(omega)
    kappa = invariants.pencil_action(f, r1, r0)
    assert (kappa ** 3).is_one()
    assert not kappa.is_one()
    assert invariants.multiplier_of(f, r2) is not None


def test_rotor_quartic_is_invariant(invariants, birmap, load, omega):
    f = birmap.build_family_map(load('rotor_a2'))
    p1 = rotor_quartic(2, omega)
    assert invariants.multiplier_of(f, p1)


@pytest.mark.slow
def test_rotor_kernel_contains_quartic(invariants, birmap, load, omega):
    f = birmap.build_family_map(load('rotor_a2'))
    p1 = rotor_quartic(2, omega)
    found = {s.multiplier: s for s in invariants.scan_multipliers(f, 4)}
    assert omega * omega in found
    assert invariants.multiplier_of(f, p1) == omega * omega
    assert in_span(p1, found[omega * omega].basis)


@pytest.mark.slow
def test_cube_root_kernel_contains_the_quartics(invariants, birmap, load, omega):
    f = birmap.build_family_map(load('cube_root'))
    found = {s.multiplier: s for s in invariants.scan_multipliers(f, 4)}
    for quartic in cube_root_quartics(omega):
        t = invariants.multiplier_of(f, quartic)
        assert t in found
        assert in_span(quartic, found[t].basis)


@pytest.mark.slow
def test_default_scan_finds_lyness_pencil(invariants, lyness_map):
    found = invariants.scan_multipliers(lyness_map, 4)
    t = invariants.multiplier_of(lyness_map, tetrahedron())
    solution = next(s for s in found if s.multiplier == t)
    assert all(in_span(q, solution.basis) for q in lyness_quartics(3))


@pytest.mark.slow
def test_determinant_candidates_over_cyclotomic_field(invariants, birmap, load, omega):
    f = birmap.build_family_map(load('cube_root'))
    candidates = invariants.determinant_candidates(f, 4)
    assert candidates
    assert not all(c.is_rational() for c in candidates)
    for quartic in cube_root_quartics(omega):
        assert invariants.multiplier_of(f, quartic) in candidates


def test_rotor_quartic_singularities(invariants, omega):
    p1 = rotor_quartic(2, omega)
    assert invariants.singular_check(p1, (0, 1, 0, 0)).kind == 'A1'
    diagonal = invariants.singular_check(p1, modulus=UniPoly([-2, -(1 + omega), 1]))
    assert diagonal.gradient_vanishes
    assert diagonal.kind == 'A1'


def test_tetrahedron_singularities(invariants):
    tetra = tetrahedron()
    report = invariants.singular_check(tetra, (0, 1, 0, 0))
    assert report.kind == 'Degenerate' and report.hessian_rank == 0
    assert not invariants.singular_check(tetra, (1, 1, 1, 1)).on_surface
    smooth = invariants.singular_check(tetra, (0, 1, 1, 1))
    assert smooth.on_surface and not smooth.gradient_vanishes
    assert smooth.to_dict()['type'] == 'Smooth'
