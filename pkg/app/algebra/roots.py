"""
Real Root Isolation
app/algebra/roots.py

Sturm-chain isolation of the real roots of integer polynomials with exact
rational interval endpoints. Floats only ever describe an isolated interval.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import sympy

from app.algebra.univariate import IntPoly, T

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraicReal:
    """Real root of an integer polynomial, isolated in [lo, hi]"""
    poly: IntPoly
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def value(self, precision: int = 53) -> mpmath.mpf:
        with mpmath.workprec(precision):
            return (mpmath.mpf(self.lo.numerator) / self.lo.denominator
                    + mpmath.mpf(self.hi.numerator) / self.hi.denominator) / 2

    def refine(self, tolerance: float) -> 'AlgebraicReal':
        lo, hi = _bisect(sturm_chain(self.poly), self.lo, self.hi, Fraction(tolerance))
        return AlgebraicReal(self.poly, lo, hi)

    def to_json(self) -> dict:
        return {
            'poly': self.poly.to_json(),
            'interval': [str(self.lo), str(self.hi)],
            'approx': self.approx,
            'tolerance': float(self.width),
        }


def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _squarefree_coeffs(poly: IntPoly) -> Tuple[int, ...]:
    sqf = sympy.Poly(poly.to_sympy(), T).sqf_part()
    return IntPoly.from_sympy(sqf).coeffs


def sturm_chain(poly: IntPoly) -> List[Tuple[Fraction, ...]]:
    """Sturm sequence of the squarefree part, as rational coefficient tuples (lowest first)"""
    sqf = sympy.Poly(poly.to_sympy(), T, domain='QQ').sqf_part()
    chain = []
    for p in sqf.sturm():
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
        chain.append(tuple(coeffs))
    return chain


def sign_variations(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = []
    for coeffs in chain:
        v = _horner(coeffs, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(poly: IntPoly) -> Fraction:
    """Cauchy bound: every real root lies in (-B, B)"""
    lead = abs(poly.coeffs[-1])
    return 1 + Fraction(max(abs(c) for c in poly.coeffs[:-1]) if poly.degree() > 0 else 0, lead)


def _bisect(chain, lo: Fraction, hi: Fraction, tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink (lo, hi], which holds exactly one root, using Sturm counts"""
    if _horner(chain[0], hi) == 0:
        return hi, hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _horner(chain[0], mid) == 0:
            return mid, mid
        if sign_variations(chain, lo) - sign_variations(chain, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def sturm_isolate(poly: IntPoly, tolerance: float = 1e-12) -> List[AlgebraicReal]:
    """
    Isolate every real root of poly

    Args:
        poly: nonzero integer polynomial (its squarefree part is used)
        tolerance: maximal width of the returned intervals

    Returns:
        Roots sorted increasingly, each with a disjoint isolating interval
    """
    if poly.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if poly.degree() == 0:
        return []
    chain = sturm_chain(poly)
    coeffs = _squarefree_coeffs(poly)
    bound = root_bound(IntPoly(coeffs))
    tol = Fraction(tolerance).limit_denominator(10 ** 18) or Fraction(1, 10 ** 18)

    isolated: List[Tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = sign_variations(chain, lo) - sign_variations(chain, hi)
        if count == 0:
            continue
        if count == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))

    roots = []
    for lo, hi in sorted(isolated):
        if lo != hi:
            lo, hi = _bisect(chain, lo, hi, tol)
        roots.append(AlgebraicReal(poly, lo, hi))
    return roots


def largest_root_above(poly: IntPoly, bound: Fraction = Fraction(1),
                       tolerance: float = 1e-12) -> Optional[AlgebraicReal]:
    """Largest real root strictly greater than bound, or None"""
    bound = Fraction(bound)
    chain = sturm_chain(poly)
    for root in reversed(sturm_isolate(poly, tolerance)):
        if root.lo >= bound and root.hi > bound:
            return root
        if root.hi <= bound:
            return None
        # the isolating interval straddles the bound
        if _horner(chain[0], bound) == 0:
            continue
        if sign_variations(chain, bound) - sign_variations(chain, root.hi) == 1:
            lo, hi = _bisect(chain, bound, root.hi, Fraction(tolerance))
            return AlgebraicReal(poly, lo, hi)
    return None


def count_real_roots(poly: IntPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]"""
    chain = sturm_chain(poly)
    return sign_variations(chain, lo) - sign_variations(chain, hi)
