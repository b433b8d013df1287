"""
Multivariate GCD and Tuple Reduction
app/algebra/mgcd.py

Recursive primitive-PRS gcd for SparsePoly over a cyclotomic field, and
gcd_reduce, which strips the common factor of a map tuple. Candidate factors
are trial-divided first; a random-line restriction then certifies coprimality
for homogeneous tuples before the general gcd is attempted.
"""
import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import HomogPoly, SparsePoly
from app.algebra.univariate import UniPoly, uni_gcd_many

logger = logging.getLogger(__name__)


def _normalize(p: SparsePoly) -> SparsePoly:
    return p.monic() if p.terms else p


def _main_variable(a: SparsePoly, b: SparsePoly) -> Optional[int]:
    used = set(a.variables()) | set(b.variables())
    return min(used) if used else None


def _content(p: SparsePoly, v: int) -> SparsePoly:
    coeffs = list(p.coefficients_in(v).values())
    g = SparsePoly.zero(p.nvars)
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_constant():
            return SparsePoly.constant(p.nvars, 1)
    return g


def _exact(p: SparsePoly, d: SparsePoly) -> SparsePoly:
    q = p.divide_exact(d)
    if q is None:
        raise ArithmeticError("expected exact division in gcd computation")
    return q


def _prem(a: SparsePoly, b: SparsePoly, v: int) -> SparsePoly:
    """Pseudo-remainder of a by b with respect to x_v"""
    db = b.degree_in(v)
    cb = b.coefficients_in(v)
    lc_b = cb[db]
    r = a
    while r and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lc_r = r.coefficients_in(v)[dr]
        mono = [0] * a.nvars
        mono[v] = dr - db
        shift = SparsePoly(a.nvars, {tuple(mono): 1})
        r = r * lc_b - lc_r * shift * b
    return r


def poly_gcd(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Monic gcd of two sparse polynomials (zero if both are zero)"""
    a = a.as_sparse()
    b = b.as_sparse()
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    v = _main_variable(a, b)
    if v is None:
        return SparsePoly.constant(a.nvars, 1)
    if a.degree_in(v) == 0 or b.degree_in(v) == 0:
        # one side is free of x_v: gcd divides every x_v-coefficient of the other
        free, other = (a, b) if a.degree_in(v) == 0 else (b, a)
        g = free
        for c in other.coefficients_in(v).values():
            g = poly_gcd(g, c)
            if g.is_constant():
                break
        return _normalize(g)
    ca = _content(a, v)
    cb = _content(b, v)
    pa = _exact(a, ca)
    pb = _exact(b, cb)
    c = poly_gcd(ca, cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if r.is_zero():
            g = pb
            break
        if r.degree_in(v) == 0:
            return _normalize(c)
        r = _exact(r, _content(r, v))
        pa, pb = pb, r
    g = _exact(g, _content(g, v))
    return _normalize(c * g)


def gcd_many(polys: Sequence[SparsePoly]) -> SparsePoly:
    g = SparsePoly.zero(polys[0].nvars)
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and g.terms:
            break
    return g


def line_restriction(p: SparsePoly, base: Sequence[CycNum], direction: Sequence[CycNum]) -> UniPoly:
    """p(base + s * direction) as a polynomial in s"""
    line = [UniPoly([b, d]) for b, d in zip(base, direction)]
    powers = [{0: UniPoly.constant(1)} for _ in line]

    def power(i, e):
        if e not in powers[i]:
            powers[i][e] = power(i, e - 1) * line[i]
        return powers[i][e]

    acc = UniPoly()
    for m, c in p.terms.items():
        term = UniPoly.constant(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        acc = acc + term
    return acc


def line_certificate(polys: Sequence[SparsePoly], rng: random.Random) -> bool:
    """
    True when restriction to a random projective line proves the homogeneous
    tuple has no common factor

    Args:
        polys: homogeneous polynomials of one tuple
        rng: random source for the line

    Returns:
        True only if coprimality is certified; False means "unknown"
    """
    n = polys[0].nvars
    base = [CycNum.coerce(rng.randint(-40, 40)) for _ in range(n)]
    direction = [CycNum.coerce(rng.randint(-40, 40)) for _ in range(n)]
    restricted = [line_restriction(p, base, direction) for p in polys]
    # a common factor could hide at s = infinity only if every restriction drops degree there
    if all(r.degree() < p.total_degree() for r, p in zip(restricted, polys) if p.terms):
        return False
    g = uni_gcd_many([r for r in restricted if r])
    return g.degree() == 0


def gcd_reduce(
    components: Sequence[SparsePoly],
    candidates: Sequence[SparsePoly] = (),
    rng: Optional[random.Random] = None,
) -> Tuple[Tuple[SparsePoly, ...], SparsePoly]:
    """
    Divide a tuple by its full common factor

    Args:
        components: nonzero tuple of polynomials sharing nvars
        candidates: likely common factors, trial-divided first
        rng: random source for the line certificate

    Returns:
        (reduced tuple, removed factor)
    """
    comps = list(components)
    if all(c.is_zero() for c in comps):
        raise ValueError("gcd_reduce of the zero tuple")
    rng = rng or random.Random(0)
    nvars = comps[0].nvars
    removed = SparsePoly.constant(nvars, 1)
    for cand in candidates:
        if cand.is_zero() or cand.is_constant():
            continue
        while True:
            quotients = [c.divide_exact(cand) for c in comps]
            if any(q is None for q in quotients):
                break
            comps = quotients
            removed = removed * cand
    homogeneous = all(c.is_homogeneous() for c in comps)
    if homogeneous and line_certificate([c for c in comps if c.terms], rng):
        return _recast(comps, components), removed
    g = gcd_many([c for c in comps if c.terms])
    if not g.is_constant():
        logger.debug(f"general gcd removed a factor of degree {g.total_degree()}")
        comps = [_exact(c, g) if c.terms else c for c in comps]
        removed = removed * g
    return _recast(comps, components), removed


def _recast(comps: List[SparsePoly], originals: Sequence[SparsePoly]) -> Tuple[SparsePoly, ...]:
    if all(isinstance(o, HomogPoly) for o in originals):
        return tuple(HomogPoly.from_sparse(c) for c in comps)
    return tuple(c.as_sparse() for c in comps)
