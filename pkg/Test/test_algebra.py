"""
Exact arithmetic: cyclotomic numbers, polynomials, gcds, root isolation
"""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.algebra.cycnum import CycNum, ONE, ZERO, cyc
from app.algebra.linalg import kernel, rank
from app.algebra.mgcd import gcd_reduce, poly_gcd
from app.algebra.polynomial import HomogPoly, SparsePoly, coordinate_vars
from app.algebra.roots import count_real_roots, largest_root_above, sturm_isolate
from app.algebra.univariate import IntPoly, UniPoly, uni_gcd


def cyc12():
    return st.builds(
        lambda num, den: CycNum(12, num, den),
        st.lists(st.integers(-6, 6), min_size=4, max_size=4),
        st.integers(1, 4),
    )


# ---- cyclotomic field ------------------------------------------------------

def test_cube_root_relations(omega):
    assert omega ** 3 == 1
    assert ONE + omega + omega * omega == ZERO
    assert omega ** -1 == omega * omega


def test_orders_align():
    assert CycNum.zeta(6, 2) == CycNum.zeta(3)
    assert CycNum.zeta(12, 4) == CycNum.zeta(3)
    assert CycNum.zeta(4) * CycNum.zeta(4) == -1
    assert CycNum.zeta(6) + CycNum.zeta(3, 2) == 0


def test_from_json_forms():
    assert CycNum.from_json('-1/2') == Fraction(-1, 2)
    assert CycNum.from_json(3) == 3
    z = CycNum.zeta(5, 2)
    assert CycNum.from_json(z.to_json()) == z
    with pytest.raises(TypeError):
        CycNum.from_json(True)


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inv()
    with pytest.raises(ZeroDivisionError):
        CycNum(3, [1], 0)


def test_embedding_of_omega(omega):
    value = omega.complex_embed(80)
    assert abs(value.real + 0.5) < 1e-20
    assert abs(value.imag - 3 ** 0.5 / 2) < 1e-15


def test_rational_detection():
    assert cyc(6, [1, 0]).is_rational()
    assert not CycNum.zeta(6).is_rational()
    assert cyc(1, [Fraction(3, 4)]).to_fraction() == Fraction(3, 4)


@given(cyc12(), cyc12(), cyc12())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(cyc12())
def test_inverse(a):
    if a:
        assert a * a.inv() == ONE
        assert (a / a).is_one()


# ---- polynomials -------------------------------------------------------------

def test_polynomial_arithmetic():
    x0, x1, x2, x3 = coordinate_vars()
    p = (x0 + x1) ** 2
    assert p == x0 * x0 + x1 * x0 * 2 + x1 * x1
    assert p.partial(0) == (x0 + x1) * 2
    assert p.evaluate([1, 2, 0, 0]) == 9
    assert (x0 + x1).divides(p)
    assert not (x0 + x2).divides(p)
    assert p.divide_exact(x0 + x1) == x0 + x1


def test_homogeneous_sum_rejects_mixed_degrees():
    x0, x1, _, _ = coordinate_vars()
    with pytest.raises(ValueError):
        x0 * x1 + x0


def test_substitute_composes():
    x0, x1, x2 = coordinate_vars(3)
    p = x0 * x1 + x2 * x2
    q = p.substitute([x1, x2, x0])
    assert q == x1 * x2 + x0 * x0


def test_json_encoding(omega):
    x0, x1, x2 = coordinate_vars(3)
    p = x0 * omega + x1 * Fraction(-1, 2) + x2
    assert HomogPoly.from_json(3, p.to_json()) == p


def test_poly_gcd_and_reduce():
    x0, x1, x2, x3 = coordinate_vars()
    common = x0 + x1 * 2 - x3
    a = common * (x0 - x2)
    b = common * (x1 + x2)
    g = poly_gcd(a, b)
    assert g.total_degree() == 1
    assert g.divides(common) and common.divides(g)
    reduced, removed = gcd_reduce([a, b, common * x3])
    assert removed.total_degree() == 1
    assert [r.total_degree() for r in reduced] == [1, 1, 1]


def test_gcd_reduce_trial_candidates():
    x0, x1, x2 = coordinate_vars(3)
    reduced, removed = gcd_reduce([x0 * x0, x0 * x1, x0 * x2], [x0])
    assert removed == x0
    assert list(reduced) == [x0, x1, x2]


# ---- univariate and linear algebra ------------------------------------------

def test_unipoly_gcd():
    a = UniPoly([-1, 0, 1])  # s^2 - 1
    b = UniPoly([1, 1])  # s + 1
    assert uni_gcd(a, b * UniPoly([2, 1])).degree() == 1
    q, r = a.divmod(b)
    assert not r and q == UniPoly([-1, 1])


def test_intpoly_helpers():
    p = IntPoly.from_high([1, 0, -1, -1])
    assert p.degree() == 3
    assert p(2) == 5
    assert p.high() == [1, 0, -1, -1]
    assert (-p).equal_up_to_sign(p)
    assert IntPoly.from_high([1, -3, 1]).is_reciprocal()
    assert not p.is_reciprocal()


def test_kernel_and_rank(omega):
    rows = [[1, omega, 0], [omega, omega * omega, 0]]
    assert rank(rows, 3) == 1
    basis = kernel(rows, 3)
    assert len(basis) == 2
    for vec in basis:
        assert all(sum((r * v for r, v in zip(row, vec)), ZERO) == 0 for row in rows)


# ---- real roots ------------------------------------------------------------------

def test_plastic_number():
    root = largest_root_above(IntPoly.from_high([1, 0, -1, -1]))
    assert abs(root.approx - 1.3247179572) < 1e-9
    assert root.width < Fraction(1, 10 ** 9)


def test_sturm_counts():
    p = IntPoly.from_high([1, -3]) * IntPoly.from_high([1, 0, -2])
    roots = sturm_isolate(p)
    assert len(roots) == 3
    assert [round(r.approx, 6) for r in roots] == [round(-2 ** 0.5, 6), round(2 ** 0.5, 6), 3.0]
    assert count_real_roots(p, Fraction(0), Fraction(2)) == 1


def test_refine_narrows_interval():
    root = sturm_isolate(IntPoly.from_high([1, 0, -2]), tolerance=1e-2)[1]
    fine = root.refine(1e-12)
    assert fine.width < root.width
    assert fine.width <= Fraction(1e-12)
    assert fine.lo <= root.hi and root.lo <= fine.hi
    assert fine.lo ** 2 <= 2 <= fine.hi ** 2


def test_cyclotomic_has_no_root_above_one():
    assert largest_root_above(IntPoly.from_high([1, 1, 1])) is None
    assert largest_root_above(IntPoly.from_high([1, 0, 0, 0, -1])) is None


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_sturm_matches_product_roots(roots):
    p = IntPoly([1])
    for r in roots:
        p = p * IntPoly([-r, 1])
    found = sturm_isolate(p)
    assert len(found) == len(set(roots))
    for r, iso in zip(sorted(set(roots)), found):
        assert iso.lo <= r <= iso.hi
