"""
Orbit Service
app/services/orbit_service.py

Tracks the orbit of the exceptional surface Sigma_gamma through the blown-up
space, records its signature (N, d-list, u-list, m_s), replays the finite
orbits that certify non-periodicity of non-critical maps, and counts
intersections of rotor curves.
"""
import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum, ONE, ZERO
from app.algebra.linalg import kernel
from app.algebra.polynomial import SparsePoly
from app.algebra.univariate import UniPoly, uni_gcd, uni_gcd_many
from app.config import get_config
from app.exceptions import (
    DegenerateParameters, DirectionDependent, ForbiddenContact, NonClosing, UnsupportedConfiguration
)
from app.models.orbit import (
    LINE_CENTERS, POINT_CENTERS, EventTag, OrbitCertificate, OrbitElement, OrbitEvent, OrbitSignature
)
from app.models.parameters import MapParameters
from app.services.atlas_service import (
    ATLAS_P3, ATLAS_X, ATLAS_Y, ATLAS_Z, AtlasService, AtlasSpec, to_uni
)
from app.services.birmap_service import BirationalMapService

logger = logging.getLogger(__name__)

E = [tuple(ONE if i == j else ZERO for i in range(4)) for j in range(4)]

BiPoly = List[UniPoly]  # coefficients of s^k, each a polynomial in t


# ---- bivariate elimination helpers --------------------------------------

def _trim(p: BiPoly) -> BiPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _bi_combine(polys: Sequence[BiPoly], weights: Sequence[int]) -> BiPoly:
    size = max((len(p) for p in polys), default=0)
    out = [UniPoly() for _ in range(size)]
    for p, w in zip(polys, weights):
        for k, c in enumerate(p):
            out[k] = out[k] + c.scale(w)
    return _trim(out)


def _bareiss(matrix: List[List[UniPoly]]) -> UniPoly:
    """Fraction-free determinant over the ring of polynomials in t"""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    prev = UniPoly.constant(1)
    for k in range(n - 1):
        if not m[k][k]:
            pivot = next((r for r in range(k + 1, n) if m[r][k]), None)
            if pivot is None:
                return UniPoly()
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                q = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divide_exact(prev)
                if q is None:
                    raise ArithmeticError("inexact Bareiss step")
                m[i][j] = q
            m[i][k] = UniPoly()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(f: BiPoly, g: BiPoly) -> UniPoly:
    """Res_s(f, g) as a polynomial in t (Sylvester determinant)"""
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return UniPoly()
    m, n = len(f) - 1, len(g) - 1
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        rows.append([UniPoly()] * i + list(reversed(f)) + [UniPoly()] * (size - m - 1 - i))
    for i in range(m):
        rows.append([UniPoly()] * i + list(reversed(g)) + [UniPoly()] * (size - n - 1 - i))
    return _bareiss(rows)


def squarefree_degree(p: UniPoly) -> int:
    """Number of distinct roots of p over the algebraic closure"""
    if p.degree() <= 0:
        return 0
    g = uni_gcd(p, p.derivative())
    return p.degree() - g.degree()


class OrbitService:
    """Orbit signatures, non-critical certificates and rotor-curve intersections"""

    def __init__(self, config=None):
        """Initialize the orbit tracker with its map and atlas services"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)
        self.birmap = BirationalMapService(self.config)
        self.atlas = AtlasService(self.config)

    # ---- element predicates ---------------------------------------------

    def _is_sigma_beta_gamma(self, element: OrbitElement, params: MapParameters) -> bool:
        return (element.chart.label == 'P3' and element.nparams == 1
                and self.atlas.satisfies(element, params.beta)
                and self.atlas.satisfies(element, params.gamma))

    def _beta_gamma_point(self, element: OrbitElement, params: MapParameters) -> bool:
        return (element.chart.label == 'P3' and element.nparams == 0
                and self.atlas.satisfies(element, params.beta)
                and self.atlas.satisfies(element, params.gamma))

    @staticmethod
    def _base_is(element: OrbitElement, point: Sequence) -> bool:
        if not all(p.is_constant() for p in element.base):
            return False
        coords = [p.constant_value() for p in element.base]
        point = [CycNum.coerce(c) for c in point]
        return all(coords[i] * point[j] == coords[j] * point[i] for i in range(4) for j in range(i + 1, 4))

    @staticmethod
    def _dependent(p: SparsePoly, q: SparsePoly) -> Optional[Tuple[CycNum, CycNum]]:
        """(l2, l3) with l2 p = l3 q, if p and q are proportional"""
        if not p.terms:
            return ONE, ZERO
        if not q.terms:
            return ZERO, ONE
        ratio = p.leading()[1] / q.leading()[1]
        if p == q.scale(ratio):
            return ONE, ratio
        return None

    def _gamma_fiber(self, element: OrbitElement, params: MapParameters) -> Optional[Tuple[CycNum, CycNum]]:
        """(l2 : l3) when the element is the line Sigma_gamma & {l2 x2 = l3 x3} through e1"""
        if element.chart.label != 'P3' or element.nparams != 1:
            return None
        if max(p.total_degree() for p in element.base) > 1:
            return None
        if not self.atlas.satisfies(element, params.gamma):
            return None
        return self._dependent(element.base[2], element.base[3])

    def _forbidden(self, element: OrbitElement) -> Optional[str]:
        label = element.chart.label
        if label == 'P3' and self.atlas.satisfies(element, E[0]) and self.atlas.satisfies(element, E[2]):
            return 'Sigma02'
        if label == 'S01' and self._base_is(element, E[2]):
            return 'fiber of S01 over e2'
        return None

    # ---- continuations ----------------------------------------------------

    def _blowup_line(self, params: MapParameters, point: Sequence[CycNum]) -> OrbitElement:
        """Line Sigma_C & {p3 x1 = p2 x2} that f spreads the point p of Sigma_beta_gamma over"""
        p2, p3 = point[2], point[3]
        basis = kernel([list(params.C), [ZERO, p3, -p2, ZERO]], 4)
        line = self.atlas.line_element(basis[0], basis[1])
        a0, a2 = params.alpha[0], params.alpha[2]
        den = p3 + a2 * p2
        if den:
            mu = -(a0 * p2) / den
            affine_form = self.atlas.line_element((ONE, mu, -a0 - a2 * mu, ZERO), E[3])
            if not self.atlas.same_locus(line, affine_form):
                raise UnsupportedConfiguration("blowup line disagrees with its affine parameterization")
        return line

    def _special_fiber_image(self, params: MapParameters) -> OrbitElement:
        """F_0BC: the S03 fiber over [0 : 1 : -alpha2 : 0]"""
        t = SparsePoly.variable(0, 1)
        base = (ZERO, ONE, -params.alpha[2], ZERO)
        return self.atlas.divisor_element('S03', base, (ONE, ZERO, ZERO, t), nparams=1)

    def _start_element(self, params: MapParameters) -> OrbitElement:
        """Sigma_BC = f(Sigma_gamma) as [1 : t : -alpha0 - alpha2 t : 0]"""
        a0, a2 = params.alpha[0], params.alpha[2]
        return self.atlas.line_element((ONE, ZERO, -a0, ZERO), (ZERO, ONE, -a2, ZERO))

    # ---- the signature tracker --------------------------------------------

    def gamma_orbit_signature(self, params: MapParameters, n_max: Optional[int] = None) -> OrbitSignature:
        """
        Orbit signature of Sigma_gamma for a critical map

        Args:
            params: critical parameters (normalized on the way in)
            n_max: step cap (config ORBIT_N_MAX by default)

        Returns:
            OrbitSignature with the event trace
        """
        if not params.is_critical():
            raise DegenerateParameters("the orbit signature is defined for critical maps")
        n_max = n_max or self.config.ORBIT_N_MAX
        if not params.is_normalized():
            params = self.birmap.normalize_critical(params)[0]
        f = self.birmap.build_family_map(params)
        special_base = (ZERO, ZERO, ONE, -params.alpha[2])
        logger.info(f"🎯 Tracking the orbit of Sigma_gamma for {params}")

        element = self._start_element(params)
        trace: List[OrbitEvent] = []
        d_list, u_list = [], []
        m_s, whole_fiber = None, None
        for step in range(1, n_max + 1):
            if self._is_sigma_beta_gamma(element, params):
                trace.append(OrbitEvent(step, EventTag.TERMINATE, element))
                signature = OrbitSignature(step, d_list, u_list, m_s, whole_fiber, trace)
                logger.info(f"✅ Orbit closed: {signature}")
                return signature.validate(strict_shape=False)
            detail: Dict = {}
            if self._beta_gamma_point(element, params):
                u_list.append(step)
                point = element.point()
                detail = {'mu': [str(point[3]), str(point[2])]}
                tag = EventTag.BLOWUP_AT_BETA_GAMMA
                nxt = self._blowup_line(params, point)
            elif element.chart.label == 'S01' and element.chart.level == 1 and self._base_is(element, special_base):
                tag = EventTag.ENTER_SPECIAL_FIBER
                detail = {'whole_fiber': element.nparams > 0}
                if m_s is None:
                    m_s, whole_fiber = step - 2, element.nparams > 0
                else:
                    logger.warning(f"⚠️ Special fiber entered again at step {step}")
                nxt = self._special_fiber_image(params)
            else:
                where = self._forbidden(element)
                if where:
                    trace.append(OrbitEvent(step, EventTag.HIT_FORBIDDEN, element, {'where': where}))
                    logger.error(f"❌ Orbit reached {where} at step {step}")
                    raise ForbiddenContact(step, where)
                lam = self._gamma_fiber(element, params)
                if lam is not None:
                    d_list.append(step)
                    detail = {'lambda': [str(lam[0]), str(lam[1])]}
                    tag = EventTag.FIBER_OF_GAMMA
                else:
                    tag = EventTag.ADVANCE
                nxt = self.atlas.apply_fY(f, element, ATLAS_Y)
            trace.append(OrbitEvent(step, tag, element, detail))
            element = nxt
        logger.warning(f"⚠️ Orbit of Sigma_gamma did not close within {n_max} steps")
        raise NonClosing(n_max, trace)

    def inverse_signature(self, params: MapParameters, n_max: Optional[int] = None) -> OrbitSignature:
        """Signature of f^-1, through the critical map conjugate to it"""
        return self.gamma_orbit_signature(self.birmap.conjugate_inverse_params(params), n_max)

    @staticmethod
    def duality_check(signature_f: OrbitSignature, signature_finv: OrbitSignature) -> bool:
        """N - u_j = d'_{m+1-j} and N - d_j = u'_{m+1-j} between f and f^-1"""
        if signature_f.N != signature_finv.N or signature_f.m != signature_finv.m:
            return False
        n, m = signature_f.N, signature_f.m
        for j in range(m):
            if n - signature_f.u_list[j] != signature_finv.d_list[m - 1 - j]:
                return False
            if n - signature_f.d_list[j] != signature_finv.u_list[m - 1 - j]:
                return False
        return True

    # ---- non-critical certificates ----------------------------------------

    def _regular(self, f, element: OrbitElement) -> bool:
        """A P3 element is not inside the indeterminacy locus of f"""
        if element.chart.label != 'P3':
            return True
        point = element
        if element.nparams:
            point = element.specialize([CycNum.coerce(self.rng.randint(2, 60)) for _ in range(element.nparams)])
        return not self.atlas.point_in(f, point)

    def _replay(self, f, start: OrbitElement, atlas: AtlasSpec, max_steps: int = 8):
        """Iterate until an element repeats; returns (trace, closure, period, note)"""
        trace = [start]
        for _ in range(max_steps):
            try:
                nxt = self.atlas.apply_fY(f, trace[-1], atlas)
            except DirectionDependent as e:
                logger.warning(f"⚠️ Replay stopped at an indeterminate element: {e}")
                return trace, 'indeterminate', None, str(e)
            for i, earlier in enumerate(trace):
                if self.atlas.same_locus(earlier, nxt):
                    trace.append(nxt)
                    period = len(trace) - 1 - i
                    return trace, 'fixed_point' if period == 1 else 'cycle', period, ''
            trace.append(nxt)
        return trace, 'open', None, f"no repetition within {max_steps} steps"

    def _plane(self, forms: Sequence[Sequence]) -> OrbitElement:
        basis = kernel([list(f) for f in forms], 4)
        return self.atlas.plane_element(basis)

    def noncritical_certificate(self, params: MapParameters) -> OrbitCertificate:
        """
        Replay the finite orbit that keeps a non-critical map from being periodic

        Args:
            params: family parameters classified as non-critical

        Returns:
            OrbitCertificate with the trace and its closure kind
        """
        cls = self.birmap.classify_parameters(params)
        if cls.critical:
            raise DegenerateParameters("critical maps have no non-critical certificate")
        label = cls.label
        logger.info(f"🎯 Certificate for non-critical case {label}")
        if label == 'linear':
            return OrbitCertificate(label, False, 'P3', [], 'linear',
                                    note='alpha2 = alpha3 = 0: the map splits into linear recurrences')

        p = cls.normalized or params
        f = self.birmap.build_family_map(p)
        g = self.birmap.build_family_inverse(p)

        if label == 'beta1_zero_beta3_beta2_nonzero':
            trace, closure, period, note = self._replay(f, self._plane([p.beta]), ATLAS_X)
            return self._certificate(label, False, ATLAS_X, f, trace, closure, period, note)

        if label == 'beta1_zero_beta2_zero_alpha2_zero':
            start = self.atlas.p3_element(E[3])
            trace, closure, period, note = self._replay(f, start, ATLAS_X)
            if closure == 'indeterminate':
                note = ('the fiber of S03 over e2 lies in the indeterminacy locus when beta2 = alpha2 = 0; '
                        + note)
            return self._certificate(label, False, ATLAS_X, f, trace, closure, period, note)

        if label == 'beta1_zero_beta2_zero_alpha2_nonzero':
            return self._invariant_pair_certificate(label, p, f)

        if label == 'beta1_zero_beta3_zero':
            trace, closure, period, note = self._replay(g, self._plane([E[0]]), ATLAS_X)
            return self._certificate(label, True, ATLAS_X, g, trace, closure, period, note)

        if label == 'sigma0_preperiodic_beta3_zero':
            trace, closure, period, note = self._replay(g, self._plane([E[0]]), ATLAS_P3)
            return self._certificate(label, True, ATLAS_P3, g, trace, closure, period, note)

        if label == 'sigma0_preperiodic_beta3_nonzero':
            return self._sigma0_beta_certificate(label, p, g)

        start = self.atlas.from_chart('S02', (SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)), nparams=2)
        if label == 'alpha3_zero':
            trace, closure, period, note = self._replay(f, start, ATLAS_Z)
            return self._certificate(label, False, ATLAS_Z, f, trace, closure, period, note)
        if label == 'alpha2_zero':
            trace, closure, period, note = self._replay(g, start, ATLAS_Z)
            return self._certificate(label, True, ATLAS_Z, g, trace, closure, period, note)
        raise UnsupportedConfiguration(f"no certificate for case {label}")

    def _certificate(self, label, inverse, atlas, m, trace, closure, period, note) -> OrbitCertificate:
        avoids = closure not in ('indeterminate', 'open') and all(self._regular(m, e) for e in trace[1:])
        cert = OrbitCertificate(label, inverse, atlas.name, trace, closure, period, avoids, note)
        if avoids:
            logger.info(f"✅ {label}: {closure} of period {period} off the indeterminacy locus")
        else:
            logger.warning(f"⚠️ {label}: closure {closure}, indeterminacy not avoided")
        return cert

    def _invariant_pair_certificate(self, label: str, p: MapParameters, f) -> OrbitCertificate:
        """Sigma02 and the S03 fiber over e2 are exchanged by f and miss the indeterminacy locus"""
        trace, _, _, note = self._replay(f, self.atlas.p3_element(E[3]), ATLAS_X, max_steps=5)
        line = self.atlas.line_element(E[1], E[3])
        fiber = self.atlas.apply_fY(f, line, ATLAS_X)
        back = self.atlas.apply_fY(f, fiber, ATLAS_X)

        def on_pair(e: OrbitElement) -> bool:
            if e.chart.label == 'P3':
                return self.atlas.satisfies(e, E[0]) and self.atlas.satisfies(e, E[2])
            return e.chart.label == 'S03' and self._base_is(e, E[2])

        invariant = (fiber.chart.label == 'S03' and fiber.nparams == 1 and self._base_is(fiber, E[2])
                     and back.chart.label == 'P3' and back.nparams == 1 and on_pair(back))
        settled = all(on_pair(e) for e in trace[2:])
        closure = 'invariant_set' if invariant and settled else 'open'
        cert_trace = trace + [line, fiber, back]
        avoids = invariant and all(self._regular(f, e) for e in cert_trace[1:])
        if closure == 'invariant_set':
            logger.info(f"✅ {label}: orbit of e3 settles in the invariant pair Sigma02 / S03 fiber over e2")
        return OrbitCertificate(label, False, ATLAS_X.name, cert_trace, closure, 2 if invariant else None,
                                avoids, note or 'Sigma02 <-> fiber of S03 over e2')

    def _sigma0_beta_certificate(self, label: str, p: MapParameters, g) -> OrbitCertificate:
        """f^-1 sends Sigma0 onto the line Sigma_0beta, which it maps onto itself"""
        start = self._plane([E[0]])
        first = self.atlas.apply_fY(g, start, ATLAS_P3)
        second = self.atlas.apply_fY(g, first, ATLAS_P3)

        def on_line(e: OrbitElement) -> bool:
            return e.chart.label == 'P3' and self.atlas.satisfies(e, E[0]) and self.atlas.satisfies(e, p.beta)

        invariant = on_line(first) and on_line(second) and not second.is_constant()
        closure = 'invariant_set' if invariant else 'open'
        trace = [start, first, second]
        avoids = invariant and all(self._regular(g, e) for e in trace[1:])
        return OrbitCertificate(label, True, ATLAS_P3.name, trace, closure, 1 if invariant else None, avoids,
                                'Sigma_0beta is invariant under f^-1')

    # ---- search and rotor -------------------------------------------------

    def closure_search(self, n_max: int = 12, param_grid: Optional[Sequence[MapParameters]] = None
                       ) -> List[Tuple[MapParameters, OrbitSignature]]:
        """Critical parameters on a grid whose Sigma_gamma orbit closes within n_max steps"""
        if param_grid is None:
            values = [Fraction(-1), Fraction(-1, 2), Fraction(1)]
            param_grid = [MapParameters.of((a0, 0, a2, 1), (b0, 1, 0, 0))
                          for a0 in values for a2 in (Fraction(-1), Fraction(1)) for b0 in (0, 1)]
        found = []
        for params in param_grid:
            try:
                signature = self.gamma_orbit_signature(params, n_max)
            except (NonClosing, ForbiddenContact, DirectionDependent, UnsupportedConfiguration) as e:
                logger.debug(f"no closure for {params}: {e}")
                continue
            found.append((params, signature))
        logger.info(f"✅ Closure search found {len(found)} of {len(param_grid)} parameter sets")
        return found

    def rotor_orbit(self, params: MapParameters) -> List[OrbitElement]:
        """
        The curves gamma_1..gamma_N of the rotor family beta = (0,1,0,0), alpha = (a,0,w,1)

        Returns:
            trace elements, gamma_j at index j - 1
        """
        a, a1, w, a3 = params.alpha
        if params.beta != E[1] or a1 or not a3.is_one():
            raise UnsupportedConfiguration("rotor parameters need beta = (0,1,0,0), alpha = (a, 0, w, 1)")
        if not (w * w * w).is_one() or w.is_one():
            raise UnsupportedConfiguration("alpha2 must be a primitive cube root of unity")
        if not a:
            raise UnsupportedConfiguration("genericity fails: a = 0")
        if (a * a * a).is_one():
            raise UnsupportedConfiguration("genericity fails: a is a cube root of unity")
        signature = self.gamma_orbit_signature(params)
        return [event.element for event in signature.trace]

    # ---- curve intersections ----------------------------------------------

    def _mobius(self) -> Tuple[int, int, int, int]:
        while True:
            p, q, r, u = (self.rng.randint(-9, 9) for _ in range(4))
            if p * u - q * r:
                return p, q, r, u

    @staticmethod
    def _reparam(vec: Sequence[UniPoly], coeffs: Tuple[int, int, int, int]) -> List[UniPoly]:
        """Substitute t -> (p t + q) / (r t + u) and clear the common denominator"""
        p, q, r, u = coeffs
        num, den = UniPoly([q, p]), UniPoly([u, r])
        degree = max((v.degree() for v in vec), default=0)
        degree = max(degree, 0)
        out = []
        for v in vec:
            acc = UniPoly()
            for k, c in enumerate(v.coeffs):
                if c:
                    acc = acc + (num ** k) * (den ** (degree - k)) * c
            out.append(acc)
        return out

    def _param_vectors(self, element: OrbitElement, coeffs) -> Dict[str, List[UniPoly]]:
        out = {}
        for key in ('base', 'normal', 'normal2'):
            vec = getattr(element, key)
            if vec:
                out[key] = self._reparam([to_uni(p) for p in vec], coeffs)
        return out

    @staticmethod
    def _minors(a: Sequence[UniPoly], b: Sequence[UniPoly]) -> List[BiPoly]:
        """2x2 minors a_i(t) b_j(s) - a_j(t) b_i(s) as polynomials in s"""
        out = []
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                size = max(len(b[i].coeffs), len(b[j].coeffs))
                poly = [a[i] * b[j].coefficient(k) - a[j] * b[i].coefficient(k) for k in range(size)]
                poly = _trim(poly)
                if poly:
                    out.append(poly)
        return out

    def _constraints(self, a: OrbitElement, b: OrbitElement) -> List[BiPoly]:
        ca, cb = self._mobius(), self._mobius()
        va, vb = self._param_vectors(a, ca), self._param_vectors(b, cb)
        if a.chart == b.chart:
            cons = []
            for key in va:
                cons += self._minors(va[key], vb[key])
            return cons
        if a.chart.label == 'P3' and b.chart.level == 1:
            base_a = va['base']
            tangent = [v.derivative() for v in base_a]
            label = b.chart.label
            cons = self._minors(base_a, vb['base'])
            if label in POINT_CENTERS:
                j = POINT_CENTERS[label]
                direction = [UniPoly() if i == j else tangent[i] for i in range(4)]
            else:
                pair = LINE_CENTERS[label]
                direction = [tangent[i] if i in pair else UniPoly() for i in range(4)]
            return cons + self._minors(direction, vb['normal'])
        if b.chart.label == 'P3':
            raise UnsupportedConfiguration("put the P3 curve first")
        raise UnsupportedConfiguration(f"no intersection rule for {a.chart} and {b.chart}")

    def curve_intersections(self, a: OrbitElement, b: OrbitElement) -> int:
        """
        Number of distinct points where two curves of the blown-up space meet

        Args:
            a: curve element (P3 curves first when the charts differ)
            b: curve element

        Returns:
            point count; common components raise UnsupportedConfiguration
        """
        if a.nparams != 1 or b.nparams != 1:
            raise UnsupportedConfiguration("intersections are counted between curves")
        if a.chart.label != 'P3' and b.chart.label == 'P3':
            a, b = b, a
        cons = self._constraints(a, b)
        if not cons:
            raise UnsupportedConfiguration("curves coincide")
        combos = [_bi_combine(cons, [self.rng.randint(1, 97) for _ in cons]) for _ in range(3)]
        results = [resultant(combos[0], combos[1]), resultant(combos[0], combos[2]),
                   resultant(combos[1], combos[2])]
        nonzero = [r for r in results if r]
        if not nonzero:
            raise UnsupportedConfiguration("curves share a component")
        common = uni_gcd_many(nonzero)
        count = squarefree_degree(common)
        logger.debug(f"{a.chart} x {b.chart}: {count} intersection points")
        return count
