"""
Invariant Service
app/services/invariant_service.py

Quartic surfaces carried to themselves by a family map: solutions of
P o f = t j_f P, multiplier scans, pencil rotations and singular points.
"""
import logging
import random
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from app.algebra.cycnum import CycNum, ONE, ZERO, common_order, totient
from app.algebra.linalg import determinant, kernel, rank
from app.algebra.polynomial import HomogPoly, Monomial, SparsePoly, coordinate_vars
from app.algebra.univariate import T, UniPoly, uni_gcd
from app.config import get_config
from app.exceptions import UnsupportedConfiguration
from app.models.birational_map import BirationalMap
from app.models.multiplier import MultiplierSolution, SingularityReport
from app.services.birmap_service import BirationalMapService

logger = logging.getLogger(__name__)

SCALARS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2))


def monomials(nvars: int, degree: int) -> List[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return sorted(out, reverse=True)


def _rational(c: CycNum) -> sympy.Rational:
    q = c.to_fraction()
    return sympy.Rational(q.numerator, q.denominator)


def _poly(nvars: int, terms: Sequence[Tuple[object, Monomial]]) -> HomogPoly:
    acc: Dict[Monomial, CycNum] = {}
    for c, m in terms:
        c = CycNum.coerce(c)
        acc[m] = acc[m] + c if m in acc else c
    return HomogPoly(nvars, acc)


# ---- invariant quartics from the literature ------------------------------

def tetrahedron() -> HomogPoly:
    x0, x1, x2, x3 = coordinate_vars()
    return x0 * x1 * x2 * x3


def rotor_quartic(a, w) -> HomogPoly:
    """Invariant quartic of the rotor map alpha = (a, 0, w, 1), beta = (0, 1, 0, 0)"""
    a, w = CycNum.coerce(a), CycNum.coerce(w)
    one = ONE
    c1, c2, c3 = one - w, -(w + 2), w * 2 + 1
    c5 = one - a * 2 + w * 2 - a * w
    c7 = -(one * 2 - a + w + a * w)
    return _poly(4, [
        (c1 * a * a, (4, 0, 0, 0)), (c1 * (a + 1), (1, 1, 2, 0)), (c1, (0, 2, 0, 2)), (c1 * a, (0, 1, 1, 2)),
        (c2, (1, 0, 3, 0)), (c2 * (a + 1), (1, 2, 0, 1)), (c2 * a, (0, 1, 2, 1)), (c2 * a, (2, 0, 0, 2)),
        (c3 * a, (2, 2, 0, 0)), (c3 * a, (1, 2, 1, 0)), (c3 * a, (0, 2, 1, 1)), (c3 * a, (1, 0, 1, 2)),
        (a * (one + a + w * 2 - a * w), (3, 1, 0, 0)),
        (c5 * (a + 1), (2, 1, 0, 1)), (c5, (1, 0, 2, 1)),
        (one - a + w * 2 + a * w, (2, 0, 2, 0)),
        (c7 * (a + 1), (2, 1, 1, 0)), (c7, (1, 1, 0, 2)),
        (a * (one - a * 2 - w - a * w), (3, 0, 0, 1)),
        ((a + 1) * (one + a - w + a * w * 2), (2, 0, 1, 1)),
        (a * (one * 2 + a + w + a * w * 2), (3, 0, 1, 0)),
    ])


def lyness_quartics(a) -> List[HomogPoly]:
    """Q0, Q1, Q2 for alpha = (a, 0, 1, 1), beta = (0, 1, 0, 0)"""
    a = CycNum.coerce(a)
    x0, x1, x2, x3 = coordinate_vars()
    q1 = (x0.scale(a) + x1 + x2 + x3) * (x0 + x1) * (x0 + x2) * (x0 + x3)
    q2 = (x0 * (x0.scale(a) + x1 + x2 + x3) + x1 * x3) * (x0 + x1 + x2) * (x0 + x2 + x3)
    return [tetrahedron(), q1, q2]


def cube_root_quartics(w) -> List[HomogPoly]:
    """R0, R1, R2 for alpha = (0, 0, w, 1), beta = (0, 1, 0, 0)"""
    w = CycNum.coerce(w)
    w2 = w * w
    x0, x1, x2, x3 = coordinate_vars()
    r1 = (x0 + x1.scale(w)) * (x0 + x2.scale(w)) * (x0 + x3.scale(w)) * (x1 + x2.scale(w2) + x3.scale(w))
    r2 = ((x1 * x3 * (x0 + x1.scale(w)) * (x0 + x3.scale(w))).scale(w)
          + (x0 * x2 * (x0 * (x1 + x3.scale(w)) + x2 * (x1.scale(w) + x3) + (x0 * x2).scale(w2))).scale(w2))
    return [tetrahedron(), r1, r2]


class InvariantService:
    """Solve P o f = t j_f P and inspect the resulting surfaces"""

    def __init__(self, config=None):
        """Initialize invariant service"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)
        self.birmap = BirationalMapService(self.config)
        self._pencils: Dict = {}

    # ---- the linear pencil ----------------------------------------------

    def _pencil(self, f: BirationalMap, degree: int):
        """Columns of P -> P o f and P -> j_f P on the degree-d monomial basis"""
        key = (f.components, degree)
        if key not in self._pencils:
            jac = self.birmap.jacobian(f)
            basis = monomials(f.nvars, degree)
            a_cols, b_cols = [], []
            for m in basis:
                mono = HomogPoly(f.nvars, {m: ONE})
                a_cols.append(mono.substitute(list(f.components)).terms)
                b_cols.append((jac * mono).terms)
            targets = sorted({m for col in a_cols + b_cols for m in col}, reverse=True)
            self._pencils[key] = (basis, targets, a_cols, b_cols)
        return self._pencils[key]

    def _rows(self, f: BirationalMap, degree: int, t: CycNum) -> Tuple[List[Monomial], List[List[CycNum]]]:
        basis, targets, a_cols, b_cols = self._pencil(f, degree)
        rows = []
        for target in targets:
            rows.append([a.get(target, ZERO) - t * b.get(target, ZERO) for a, b in zip(a_cols, b_cols)])
        return basis, rows

    def invariant_space(self, f: BirationalMap, degree: int = 4, t=1) -> List[HomogPoly]:
        """
        Basis of the degree-d solutions of P o f = t j_f P

        Args:
            f: family map
            degree: degree of P
            t: multiplier

        Returns:
            exact kernel basis (possibly empty)
        """
        t = CycNum.coerce(t)
        basis, rows = self._rows(f, degree, t)
        vectors = kernel(rows, len(basis))
        polys = [HomogPoly(f.nvars, {m: c for m, c in zip(basis, v) if c}) for v in vectors]
        logger.debug(f"degree {degree}, t={t}: kernel dimension {len(polys)}")
        return polys

    def solution(self, f: BirationalMap, degree: int = 4, t=1) -> MultiplierSolution:
        return MultiplierSolution(CycNum.coerce(t), degree, self.invariant_space(f, degree, t))

    # ---- multiplier search ------------------------------------------------

    def default_candidates(self, f: BirationalMap) -> List[CycNum]:
        n = 1
        for c in f.components:
            n = max(n, c.coefficient_order())
        roots = [CycNum.zeta(n, k) for k in range(n)] if n > 1 else [ONE]
        out = []
        for q in SCALARS:
            for z in roots:
                value = z * CycNum.coerce(q)
                if value not in out:
                    out.append(value)
        return out

    def determinant_candidates(self, f: BirationalMap, degree: int = 4) -> List[CycNum]:
        """
        Roots zeta^k r, r rational, of det(R (A - t B)) for a random integer R with square product

        Every multiplier with a solution is a root. Rational pencils are handled
        by sympy over QQ[t]; cyclotomic ones are sampled at integer t and
        interpolated one power-basis coordinate at a time.
        """
        basis, targets, a_cols, b_cols = self._pencil(f, degree)
        if len(targets) < len(basis):
            return []
        weights = [[self.rng.randint(-3, 3) for _ in targets] for _ in basis]

        def combine(cols):
            return [[sum((col.get(target, ZERO) * w for w, target in zip(ws, targets) if w), ZERO)
                     for col in cols] for ws in weights]

        a_rows, b_rows = combine(a_cols), combine(b_cols)
        values = [c for row in a_rows + b_rows for c in row]
        if all(c.is_rational() for c in values):
            rows = [[_rational(a) - T * _rational(b) for a, b in zip(ra, rb)] for ra, rb in zip(a_rows, b_rows)]
            matrix = DomainMatrix.from_list_sympy(len(rows), len(rows), rows)
            det = sympy.Poly(matrix.domain.to_sympy(matrix.det()), T)
            if det.is_zero:
                return []
            return [CycNum.coerce(Fraction(int(r.p), int(r.q))) for r in det.ground_roots() if r]

        def rows_at(t: CycNum) -> List[List[CycNum]]:
            return [[a - t * b for a, b in zip(ra, rb)] for ra, rb in zip(a_rows, b_rows)]

        return self._cyclotomic_roots(rows_at, len(basis), common_order(values))

    @staticmethod
    def _cyclotomic_roots(rows_at, size: int, n: int) -> List[CycNum]:
        points = list(range(size + 1))
        samples = [determinant(rows_at(CycNum.coerce(t))) for t in points]
        if not any(samples):
            return []
        phi = totient(n)
        columns = []
        for j in range(phi):
            data = [(t, sympy.Rational(v.lifted(n)[j], v.den)) for t, v in zip(points, samples)]
            poly = sympy.Poly(sympy.interpolate(data, T), T)
            columns.append([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())])
        width = max(len(col) for col in columns)
        coeffs = [CycNum.from_fractions(n, [col[i] if i < len(col) else 0 for col in columns])
                  for i in range(width)]

        out: List[CycNum] = []
        for k in range(n):
            z = CycNum.zeta(n, k)
            rotated = [c * z ** i for i, c in enumerate(coeffs)]
            parts = []
            for j in range(phi):
                expr = sum((sympy.Rational(c.lifted(n)[j], c.den) * T ** i for i, c in enumerate(rotated)),
                           sympy.Integer(0))
                if expr != 0:
                    parts.append(sympy.Poly(expr, T))
            common = reduce(sympy.gcd, parts)
            for r in common.ground_roots():
                if r:
                    value = z * CycNum.coerce(Fraction(int(r.p), int(r.q)))
                    if value not in out:
                        out.append(value)
        logger.debug(f"cyclotomic determinant candidates: {[str(v) for v in out]}")
        return out

    def scan_multipliers(self, f: BirationalMap, degree: int = 4,
                         candidates: Optional[Sequence] = None) -> List[MultiplierSolution]:
        """
        Multipliers with a nontrivial solution space

        Args:
            f: family map
            degree: degree of P
            candidates: multipliers to test (default: small scalars times roots of unity,
                plus rational roots of a random square minor)

        Returns:
            solutions sorted by decreasing dimension
        """
        if candidates is None:
            candidates = self.default_candidates(f)
            for extra in self.determinant_candidates(f, degree):
                if extra not in candidates:
                    candidates.append(extra)
        found = []
        for t in candidates:
            sol = self.solution(f, degree, t)
            if sol.dimension:
                found.append(sol)
        found.sort(key=lambda s: -s.dimension)
        logger.info(f"✅ {len(found)} multipliers with invariant degree-{degree} polynomials")
        return found

    # ---- pencils ------------------------------------------------------------

    def multiplier_of(self, f: BirationalMap, p: HomogPoly) -> CycNum:
        """The t with P o f = t j_f P; raises when P is not a solution"""
        lhs = p.substitute(list(f.components))
        rhs = self.birmap.jacobian(f) * p
        q = lhs.divide_exact(rhs)
        if q is None or not q.is_constant() or not q.terms:
            raise UnsupportedConfiguration(f"{p.to_str()} does not satisfy the invariance equation")
        return q.constant_value()

    def pencil_action(self, f: BirationalMap, p: HomogPoly, q: HomogPoly) -> CycNum:
        """kappa = t_P / t_Q, so that f(P/Q) scales by kappa"""
        kappa = self.multiplier_of(f, p) / self.multiplier_of(f, q)
        logger.info(f"🎯 Pencil multiplier ratio {kappa}")
        return kappa

    # ---- singular points ------------------------------------------------

    @staticmethod
    def _hessian_rows(p: SparsePoly, free: Sequence[int]) -> List[List[SparsePoly]]:
        return [[p.partial(i).partial(j) for j in free] for i in free]

    def singular_check(self, p: HomogPoly, point: Optional[Sequence] = None,
                       modulus: Optional[UniPoly] = None) -> SingularityReport:
        """
        Gradient and affine Hessian test of {P = 0} at a point

        Args:
            p: homogeneous polynomial in 4 variables
            point: exact projective coordinates
            modulus: instead of a point, x0 = 1 and x1 = x2 = x3 = s with s a root of modulus

        Returns:
            SingularityReport (kind Smooth, A1, CorankOne or Degenerate)
        """
        if modulus is not None:
            return self._singular_on_diagonal(p, modulus)
        point = [CycNum.coerce(c) for c in point]
        if p.evaluate(point):
            return SingularityReport(False, False, 0, 'Smooth')
        if any(p.partial(i).evaluate(point) for i in range(p.nvars)):
            return SingularityReport(True, False, 0, 'Smooth')
        chart = next(i for i, c in enumerate(point) if c)
        free = [i for i in range(p.nvars) if i != chart]
        hessian = [[h.evaluate(point) for h in row] for row in self._hessian_rows(p, free)]
        r = rank(hessian, len(free))
        return SingularityReport(True, True, r, self._kind(r))

    @staticmethod
    def _kind(hessian_rank: int) -> str:
        return {3: 'A1', 2: 'CorankOne'}.get(hessian_rank, 'Degenerate')

    def _singular_on_diagonal(self, p: HomogPoly, modulus: UniPoly) -> SingularityReport:
        s = SparsePoly.variable(0, 1)
        one = SparsePoly.constant(1, 1)
        values = [one, s, s, s]

        def reduce(q: SparsePoly) -> UniPoly:
            sub = q.substitute(values)
            coeffs = [ZERO] * (max((m[0] for m in sub.terms), default=0) + 1)
            for m, c in sub.terms.items():
                coeffs[m[0]] = c
            return UniPoly(coeffs).divmod(modulus)[1]

        def vanishes(u: UniPoly) -> bool:
            return not u

        if not vanishes(reduce(p)):
            return SingularityReport(False, False, 0, 'Smooth')
        if not all(vanishes(reduce(p.partial(i))) for i in range(p.nvars)):
            return SingularityReport(True, False, 0, 'Smooth')
        free = [1, 2, 3]
        h = [[reduce(e) for e in row] for row in self._hessian_rows(p, free)]
        det = (h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
               - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
               + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]))
        det = det.divmod(modulus)[1]
        if det and uni_gcd(det, modulus).degree() == 0:
            r = 3
        else:
            minors = [h[i][k] * h[j][l] - h[i][l] * h[j][k]
                      for i in range(3) for j in range(i + 1, 3) for k in range(3) for l in range(k + 1, 3)]
            minors = [m.divmod(modulus)[1] for m in minors]
            r = 2 if any(m and uni_gcd(m, modulus).degree() == 0 for m in minors) else 1
        return SingularityReport(True, True, r, self._kind(r))
