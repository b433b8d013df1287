"""
Picard Service
app/services/picard_service.py

Pullback matrices on Pic(Y) and Pic(Z), characteristic polynomials computed
from the matrix and from the orbit signature, dynamical degrees, degree
prediction, growth classes and Salem verdicts.
"""
import logging
import random
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

import mpmath
import numpy as np
import sympy

from app.algebra.roots import count_real_roots, largest_root_above
from app.algebra.univariate import IntPoly, LaurentPoly, T
from app.config import get_config
from app.exceptions import InconsistentSignature
from app.models.orbit import OrbitSignature
from app.models.pic_action import DegreeReport, GrowthClass, GrowthKind, PicAction, SalemVerdict

logger = logging.getLogger(__name__)

BASE_LABELS = ['H', 'E1', 'S03', 'S01', 'E3']
H, E1, S03, S01, E3 = range(5)

# f_Y^* on {H, E1, S03, S01, E3}, one list per basis element (its image)
PIC_Y_COLUMNS = [
    [2, -1, 0, -1, -1],
    [0, 0, 1, 0, 0],
    [1, -1, -1, -1, -1],
    [0, 0, 0, 0, 1],
    [1, 0, 0, -1, -1],
]

# F_N row of the Pic(Z) matrix; the F_1 entry is appended separately
F_N_ROW = [-1, 0, 0, 0, -1]
# F_1 column restricted to the first five rows
F_1_TOP = [1, -1, 0, 0, 0]

# extra entries on the rows F_{m_s} .. F_{m_s+4}: (offset, columns hit with -1, touches F_1)
SPECIAL_BLOCK = [
    (4, (H, S03), True),
    (3, (S03,), False),
    (2, (H, S03, E3), True),
    (1, (H, S03, E3), False),
    (0, (E3,), False),
]

PHI_T2 = IntPoly([1, 0, 1])


def cyclotomic_part(poly: IntPoly) -> Tuple[List[int], IntPoly]:
    """
    Strip cyclotomic factors by trial division

    Args:
        poly: nonzero integer polynomial

    Returns:
        (orders k of every Phi_k removed, with multiplicity; remaining factor)
    """
    rest = poly.to_sympy()
    orders = []
    degree = rest.degree()
    k = 1
    while k <= 2 * degree * degree + 2:
        if sympy.totient(k) <= rest.degree():
            phi = sympy.Poly(sympy.cyclotomic_poly(k, T), T, domain='ZZ')
            while rest.degree() >= phi.degree():
                q, r = sympy.div(rest, phi)
                if not r.is_zero:
                    break
                rest = q
                orders.append(k)
        k += 1
    return orders, IntPoly.from_sympy(rest)


def irreducible_factors(poly: IntPoly) -> List[IntPoly]:
    _, factors = sympy.factor_list(poly.to_sympy())
    return [IntPoly.from_sympy(f) for f, _ in factors]


class PicardService:
    """Divisor-class pullback matrices and the spectral data derived from them"""

    def __init__(self, config=None):
        """Initialize Picard service"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)

    # ---- matrices ---------------------------------------------------------

    @staticmethod
    def picY_matrix() -> PicAction:
        """f_Y^* when the orbit of Sigma_gamma never reaches Sigma_beta_gamma"""
        return PicAction.from_columns(BASE_LABELS, PIC_Y_COLUMNS)

    @staticmethod
    def picZ_labels(n: int) -> List[str]:
        return BASE_LABELS + [f'F{k}' for k in range(n, 0, -1)]

    def picZ_matrix(self, signature: OrbitSignature) -> PicAction:
        """
        f_Z^* on {H, E1, S03, S01, E3, F_N, ..., F_1}

        Args:
            signature: closed orbit signature

        Returns:
            PicAction of size N + 5
        """
        signature.validate(strict_shape=False)
        n = signature.N
        size = n + 5
        m = np.zeros((size, size), dtype=object)

        def idx(k: int) -> int:
            return n + 5 - k

        last = idx(1)
        for col, image in enumerate(PIC_Y_COLUMNS):
            for row, value in enumerate(image):
                m[row, col] = value
        for row, value in enumerate(F_1_TOP):
            m[row, last] = value
        for col, value in enumerate(F_N_ROW):
            m[idx(n), col] = value
        m[idx(n), last] += -1

        for k in range(1, n):
            m[idx(k), idx(k + 1)] = 1
        for k in signature.d_list:
            m[idx(k), last] -= 1
        for k in signature.u_list:
            m[idx(k), H] -= 1
            m[idx(k), E3] -= 1
            m[idx(k), last] -= 1
        if signature.m_s is not None:
            for offset, cols, hits_f1 in SPECIAL_BLOCK:
                k = signature.m_s + offset
                if k >= n:
                    raise InconsistentSignature(f"special block row F{k} past F{n - 1}")
                for col in cols:
                    m[idx(k), col] -= 1
                if hits_f1:
                    m[idx(k), last] -= 1
        return PicAction(self.picZ_labels(n), m)

    # ---- characteristic polynomials --------------------------------------

    @staticmethod
    def char_poly_bracket(signature: OrbitSignature) -> IntPoly:
        """
        t^(N-1) [(Q1 - Q4) t^3 + (2Q1 - Q2 - Q3 - Q4) t^2 + (Q1 - Q3) t + Q4]

        Args:
            signature: closed orbit signature (m_s None drops the special-fiber terms)

        Returns:
            integer polynomial of degree N + 3
        """
        n = signature.N
        inv_d = LaurentPoly.geometric([-d for d in signature.d_list])
        inv_u = LaurentPoly.geometric([-u for u in signature.u_list])
        q1 = -1 - inv_d
        q2 = LaurentPoly()
        q3 = -1 - inv_d
        q4 = LaurentPoly.monomial(1, -1) - inv_d.shift(1) - inv_u.shift(1) - LaurentPoly.monomial(1 - n)
        if signature.m_s is not None:
            ms = signature.m_s
            q1 = q1 + LaurentPoly.monomial(-ms - 1)
            q2 = LaurentPoly.geometric(range(-ms - 4, -ms))
            q3 = q3 + LaurentPoly({-ms: 1, -ms - 1: 1, -ms - 4: -1})
            q4 = q4 - LaurentPoly({-ms - 1: 1, -ms - 3: 1})
        body = ((q1 - q4).shift(3) + (q1 * 2 - q2 - q3 - q4).shift(2) + (q1 - q3).shift(1) + q4)
        return body.shift(n - 1).to_intpoly()

    @staticmethod
    def char_poly_det(action: PicAction) -> IntPoly:
        """det(t I - M), computed exactly"""
        matrix = sympy.Matrix(action.matrix.tolist())
        return IntPoly.from_sympy(matrix.charpoly(T).as_expr())

    def identity_check(self, signature: OrbitSignature) -> Dict:
        """Matrix characteristic polynomial against (t^2 + 1) times the bracket polynomial"""
        full = self.char_poly_det(self.picZ_matrix(signature))
        expected = PHI_T2 * self.char_poly_bracket(signature)
        holds = full.equal_up_to_sign(expected)
        # det(M - tI) = (-1)^(N+5) det(tI - M)
        sign = -1 if (signature.N + 5) % 2 else 1
        if holds:
            logger.info(f"✅ Determinant identity holds for N={signature.N}")
        else:
            logger.error(f"❌ Determinant identity fails for {signature}: {full} vs {expected}")
        return {'holds': holds, 'sign': sign, 'full': full.to_json(), 'expected': expected.to_json()}

    # ---- spectral data ----------------------------------------------------

    def dynamical_degree(self, poly: IntPoly) -> DegreeReport:
        """
        Largest real root above 1 and the irreducible factor carrying it

        Args:
            poly: nonzero integer polynomial

        Returns:
            DegreeReport; value None with cyclotomic_only when every root has modulus 1
        """
        root = largest_root_above(poly, Fraction(1), self.config.ROOT_TOL)
        if root is None:
            return DegreeReport(None, None, cyclotomic_only=True)
        for factor in irreducible_factors(poly):
            if factor.degree() >= 1 and count_real_roots(factor, root.lo, root.hi) == 1:
                found = largest_root_above(factor, Fraction(1), self.config.ROOT_TOL)
                if found is not None:
                    return DegreeReport(found, factor)
        return DegreeReport(root, poly)

    def _period_bound(self, orders: Sequence[int]) -> int:
        base = lcm(*orders) if orders else 1
        return min(2 * base, self.config.PERIOD_ORDER_CAP)

    @staticmethod
    def _is_identity(matrix: np.ndarray) -> bool:
        return bool((matrix == np.identity(matrix.shape[0], dtype=object)).all())

    @staticmethod
    def jordan_block_at_one(matrix: np.ndarray, max_k: int = 6) -> Tuple[int, List[int]]:
        """Largest Jordan block at eigenvalue 1, from the nullities of (M - I)^k"""
        shifted = sympy.Matrix(matrix.tolist()) - sympy.eye(matrix.shape[0])
        nullities = []
        power = sympy.eye(matrix.shape[0])
        for _ in range(max_k):
            power = power * shifted
            nullities.append(matrix.shape[0] - power.rank())
            if len(nullities) > 1 and nullities[-1] == nullities[-2]:
                break
        block = next((k for k in range(1, len(nullities)) if nullities[k] == nullities[k - 1]), len(nullities))
        return block, nullities

    def growth_class(self, action: PicAction) -> GrowthClass:
        """
        Degree-growth class of a pullback matrix

        Args:
            action: integer pullback matrix

        Returns:
            Exponential with the dynamical degree, Periodic with the matrix order,
            otherwise Linear or Quadratic from the Jordan structure at 1
        """
        poly = self.char_poly_det(action)
        report = self.dynamical_degree(poly)
        if report.value is not None:
            logger.info(f"🎯 Exponential growth, delta ~ {report.approx:.6f}")
            return GrowthClass(GrowthKind.EXPONENTIAL, delta=report.value)

        orders, rest = cyclotomic_part(poly)
        # eigenvalue 0 comes from classes the map contracts and does not affect growth
        while rest.degree() > 0 and not rest.coeffs[0]:
            rest = IntPoly(rest.coeffs[1:])
        if rest.degree() > 0:
            logger.warning(f"⚠️ Non-cyclotomic factor {rest} without a positive root above 1")
            return GrowthClass(GrowthKind.EXPONENTIAL)
        full = lcm(*orders) if orders else 1
        folded = action.power(full)
        if self._is_identity(folded):
            order = min(k for k in sympy.divisors(full) if self._is_identity(action.power(k)))
            logger.info(f"✅ Pullback is periodic of order {order}")
            return GrowthClass(GrowthKind.PERIODIC, order=order)

        # every eigenvalue is a root of unity of order dividing `full`; M^full folds them onto 1
        block, nullities = self.jordan_block_at_one(folded)
        if block <= 1:
            bound = self._period_bound(orders)
            return GrowthClass(GrowthKind.BOUNDED, jordan_block=block, kernel_ranks=nullities,
                               order=None if bound >= self.config.PERIOD_ORDER_CAP else bound)
        kind = GrowthKind.LINEAR if block == 2 else GrowthKind.QUADRATIC
        if block > 3:
            logger.warning(f"⚠️ Jordan block of size {block} at 1")
        logger.info(f"✅ {kind.value} degree growth (Jordan block {block})")
        return GrowthClass(kind, jordan_block=block, kernel_ranks=nullities)

    @staticmethod
    def predicted_degrees(action: PicAction, n_max: int) -> List[int]:
        """H-coefficient of (M^n) e_H for n = 1..n_max"""
        if action.labels[0] != 'H':
            raise ValueError("degree prediction needs H as the first basis class")
        v = np.zeros(action.size, dtype=object)
        v[0] = 1
        out = []
        for _ in range(n_max):
            v = action.matrix.dot(v)
            out.append(int(v[0]))
        return out

    @staticmethod
    def degree_recurrence_check(poly: IntPoly, degrees: Sequence[int]) -> bool:
        """The sequence 1, d_1, d_2, ... satisfies the linear recurrence with characteristic poly"""
        seq = [1] + list(degrees)
        coeffs = poly.coeffs
        k = poly.degree()
        if len(seq) <= k:
            return True
        return all(sum(c * seq[n + i] for i, c in enumerate(coeffs)) == 0 for n in range(len(seq) - k))

    def salem_verdict(self, poly: IntPoly) -> SalemVerdict:
        """
        Decide whether the largest root of poly is a Salem number

        Args:
            poly: nonzero integer polynomial

        Returns:
            SalemVerdict naming the factor tested and the failed condition, if any
        """
        tol = self.config.SALEM_TOL
        _, rest = cyclotomic_part(poly)
        if rest.degree() <= 0:
            return SalemVerdict(False, 'only cyclotomic factors')
        report = self.dynamical_degree(rest)
        if report.value is None:
            return SalemVerdict(False, 'no real root above 1', rest)
        factor, value = report.factor, report.approx
        if factor.degree() < 4:
            return SalemVerdict(False, f'degree {factor.degree()} is below 4', factor, value)
        if not factor.is_reciprocal():
            return SalemVerdict(False, 'factor is not self-reciprocal', factor, value)

        with mpmath.workdps(30):
            roots = mpmath.polyroots(factor.high(), maxsteps=200, extraprec=200)
            moduli = [float(abs(r)) for r in roots]
        outside = [r for r in moduli if r > 1 + tol]
        on_circle = [r for r in moduli if abs(r - 1) <= tol]
        if len(outside) != 1:
            return SalemVerdict(False, f'{len(outside)} roots outside the unit circle', factor, value)
        if not on_circle:
            return SalemVerdict(False, 'no root on the unit circle', factor, value)
        logger.info(f"✅ Salem number {value:.8f} with minimal polynomial {factor}")
        return SalemVerdict(True, 'Salem', factor, value)

    # ---- signatures for property tests -----------------------------------

    @staticmethod
    def signature_from_random(seed: int, n_max: int = 24) -> OrbitSignature:
        """Random signature with alternating d/u events and an optional special block"""
        rng = random.Random(seed)
        n = rng.randint(3, max(3, n_max))
        m_s = None
        if n >= 6 and rng.random() < 0.5:
            m_s = rng.randint(1, n - 5)
        blocked = set(range(m_s, m_s + 5)) if m_s is not None else set()
        free = [k for k in range(2, n) if k not in blocked]
        m = rng.randint(0, len(free) // 2)
        events = sorted(rng.sample(free, 2 * m))
        signature = OrbitSignature(n, events[0::2], events[1::2], m_s, None if m_s is None else True)
        return signature.validate()
