"""
Planar Service
app/services/planar_service.py

Rotor maps of the invariant plane, exceptional-curve verification, exact
point orbits, pullback matrices built from blowup ledgers, the 2D
intersection form and the automorphism-conjugacy verdict.
"""
import logging
import random
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import sympy

from app.algebra.cycnum import CycNum, ONE, ZERO
from app.algebra.linalg import kernel
from app.algebra.mgcd import gcd_reduce
from app.algebra.polynomial import HomogPoly, coordinate_vars
from app.algebra.univariate import IntPoly, T, UniPoly
from app.config import get_config
from app.exceptions import InconsistentLedger, UnsupportedConfiguration
from app.models.birational_map import BirationalMap, DegreeSequence
from app.models.parameters import MapParameters
from app.models.pic_action import GrowthClass, GrowthKind, PicAction, SalemVerdict
from app.models.plane_ledger import AutomorphismVerdict, ClassVector2D, PlaneLedger, PlaneOrbit
from app.services.birmap_service import BirationalMapService, apply_to_univariate
from app.services.picard_service import PicardService

logger = logging.getLogger(__name__)

OMEGA = CycNum.zeta(3)
LAM = sympy.Symbol('lam')

PERIODIC = 'Periodic'
HITS_INDETERMINACY = 'HitsIndeterminacy'
OPEN = 'Open'


def normalize_point(point: Sequence) -> List[CycNum]:
    """Scale a projective point so its first nonzero coordinate is 1"""
    values = [CycNum.coerce(v) for v in point]
    lead = next((v for v in values if v), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = lead.inv()
    return [v * inv for v in values]


def same_point(p: Sequence, q: Sequence) -> bool:
    p, q = [CycNum.coerce(v) for v in p], [CycNum.coerce(v) for v in q]
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(i + 1, len(p)))


def proportional(f: BirationalMap, g: BirationalMap) -> bool:
    """f and g have the same components up to one common scalar"""
    if f.nvars != g.nvars or f.degree != g.degree:
        return False
    p, q = f.components, g.components
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(i + 1, len(p)))


def rotor_curves(a, w: CycNum = OMEGA) -> Dict[str, HomogPoly]:
    """The four candidate exceptional curves of the cubic rotor map"""
    a = CycNum.coerce(a)
    x0, x1, x2 = coordinate_vars(3)
    return {
        'C1': x0 * a + x2 * w,
        'C2': x0 * a + x1 * a + x2 * w,
        'C3': x0 * (a * w) + x1 + x2 * (w * w),
        'C4': (x0 * x0) * (a * w) + (x0 * x1) * (a * w) + (x0 * x2) * (a * w + w * w)
              + x1 * x2 + (x2 * x2) * (w * w),
    }


class PlanarService:
    """Plane rotor maps, blowup ledgers and their Picard data"""

    def __init__(self, config=None, birmap: Optional[BirationalMapService] = None,
                 picard: Optional[PicardService] = None):
        """Initialize the planar service with the map and Picard services it delegates to"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)
        self.birmap = birmap or BirationalMapService(self.config)
        self.picard = picard or PicardService(self.config)

    # ---- rotor maps -----------------------------------------------------

    def rotor_map(self, a, w: CycNum = OMEGA) -> BirationalMap:
        """
        Cubic return map of the invariant plane for parameter a

        Args:
            a: field element; special values make the components share a factor
            w: cube root of unity of the family

        Returns:
            gcd-reduced BirationalMap in 3 coordinates
        """
        a = CycNum.coerce(a)
        x0, x1, x2 = coordinate_vars(3)
        c = rotor_curves(a, w)
        comps = [x0 * c['C1'] * c['C2'], x1 * c['C4'], (x2 * c['C1'] * c['C3']) * w]
        shared = x0 + x1 + x2 * (w * w)
        reduced, removed = gcd_reduce(comps, [shared] + coordinate_vars(3), rng=self.rng)
        g = BirationalMap(reduced, label=f'rotor(a={a})')
        if not removed.is_constant():
            logger.info(f"🎯 Rotor map at a={a} drops to degree {g.degree}")
        return g

    def lyness_rotor(self, a) -> BirationalMap:
        """Quadratic rotor of the Lyness parameters alpha = (a, 0, 1, 1)"""
        a = CycNum.coerce(a)
        x0, x1, x2 = coordinate_vars(3)
        comps = (x0 * (x0 * a + x1 * a + x2), x1 * (x0 + x1 + x2), x2 * (x0 * a + x1 + x2))
        return BirationalMap(comps, label=f'lyness_rotor(a={a})')

    def cube_root_rotor(self, w: CycNum = OMEGA) -> BirationalMap:
        """Quadratic rotor at a = 0, where the cubic map loses the factor x2"""
        g = self.rotor_map(ZERO, w)
        return BirationalMap(g.components, label='cube_root_rotor')

    def closed_form_for(self, params: MapParameters) -> BirationalMap:
        """Closed-form rotor of alpha = (a, 0, w, 1) or of the Lyness parameters alpha = (a, 0, 1, 1)"""
        a0, a1, a2, a3 = params.alpha
        if tuple(params.beta) != (ZERO, ONE, ZERO, ZERO) or a1 or not a3.is_one():
            raise UnsupportedConfiguration(f"no closed-form rotor for {params}")
        if a2.is_one():
            return self.lyness_rotor(a0)
        if a2 == OMEGA:
            return self.rotor_map(a0)
        raise UnsupportedConfiguration(f"no closed-form rotor for alpha2 = {a2}")

    def restriction_check(self, params: MapParameters) -> Dict:
        """
        Restriction of f^8 to Sigma3 against the closed-form rotor

        Returns:
            dict with both degrees and whether the maps agree up to a scalar
        """
        closed = self.closed_form_for(params)
        restricted = self.birmap.restrict_to_plane(params)
        agree = proportional(closed, restricted)
        if agree:
            logger.info(f"✅ Restriction matches {closed.label}")
        else:
            logger.warning(f"⚠️ Restriction of degree {restricted.degree} differs from {closed.label}")
        return {'closed_form': closed.label, 'closed_degree': closed.degree,
                'restricted_degree': restricted.degree, 'agree': agree}

    def map_for(self, ledger: PlaneLedger) -> BirationalMap:
        if ledger.kind == 'cubic':
            if ledger.a is None:
                raise InconsistentLedger(f"{ledger.name}: cubic ledger without a")
            return self.rotor_map(ledger.a)
        if ledger.kind == 'lyness':
            return self.lyness_rotor(ledger.a if ledger.a is not None else 2)
        if ledger.kind == 'cube_root':
            return self.cube_root_rotor()
        raise InconsistentLedger(f"{ledger.name}: unknown map kind {ledger.kind}")

    # ---- exceptional curves ---------------------------------------------

    @staticmethod
    def _point_on(curve: HomogPoly, through: Optional[Sequence] = None) -> List[CycNum]:
        candidates = [list(through)] if through is not None else []
        candidates += [[ONE if i == j else ZERO for i in range(3)] for j in range(3)]
        candidates += [[ONE, ONE, ZERO], [ONE, ZERO, ONE], [ZERO, ONE, ONE], [ONE, -ONE, ZERO],
                       [ONE, ZERO, -ONE], [ZERO, ONE, -ONE]]
        for p in candidates:
            if not curve.evaluate(p):
                return [CycNum.coerce(v) for v in p]
        raise UnsupportedConfiguration(f"no known point on the conic {curve.to_str()}")

    def parametrize(self, curve: HomogPoly, through: Optional[Sequence] = None) -> List[UniPoly]:
        """
        Rational parametrization of a line or a smooth conic

        Args:
            curve: homogeneous polynomial of degree 1 or 2 in 3 coordinates
            through: known point of the conic, tried before the coordinate points

        Returns:
            three univariate polynomials in s
        """
        degree = curve.total_degree()
        if degree == 1:
            units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
            form = [curve.terms.get(m, ZERO) for m in units]
            p, q = kernel([form], 3)
            return [UniPoly([u, v]) for u, v in zip(p, q)]
        if degree != 2:
            raise UnsupportedConfiguration(f"cannot parametrize a curve of degree {degree}")

        base = self._point_on(curve, through)
        grad = [curve.partial(i).evaluate(base) for i in range(3)]
        if not any(grad):
            raise UnsupportedConfiguration(f"conic {curve.to_str()} is singular at {base}")
        # the line base + s*w meets the conic again at s = -L(w)/Q(w)
        k = next(i for i, v in enumerate(base) if v)
        i, j = [n for n in range(3) if n != k]
        w = [UniPoly([ONE if n == i else ZERO, ONE if n == j else ZERO]) for n in range(3)]
        quad = apply_to_univariate([curve], w)[0]
        lin = UniPoly()
        for g_n, w_n in zip(grad, w):
            lin = lin + w_n.scale(g_n)
        return [quad.scale(b) - w_n * lin for b, w_n in zip(base, w)]

    def plane_exceptional_verify(self, g: BirationalMap,
                                 candidates: Mapping[str, HomogPoly]) -> List[Dict]:
        """
        Check which candidate curves the plane map contracts, and to which point

        A candidate is verified when it divides the Jacobian of g and g
        restricted to a parametrization of it is constant after removing the
        common factor.

        Args:
            g: plane birational map
            candidates: label -> curve equation

        Returns:
            list of {curve, equation, divides_jacobian, verified, image, residue}
        """
        jac = self.birmap.jacobian(g)
        results = []
        for label, curve in candidates.items():
            entry = {'curve': label, 'equation': curve.to_str(('x0', 'x1', 'x2')),
                     'divides_jacobian': curve.divides(jac), 'verified': False,
                     'image': None, 'residue': None}
            if not entry['divides_jacobian']:
                entry['residue'] = 'does not divide the Jacobian'
                results.append(entry)
                continue
            values = apply_to_univariate(g.components, self.parametrize(curve))
            if not any(values):
                entry['residue'] = 'curve lies in the indeterminacy locus'
                results.append(entry)
                continue
            image = BirationalMapService._strip_common(values, self.rng)
            degree = max(v.degree() for v in image if v)
            if degree > 0:
                entry['residue'] = f'strict transform is a curve (degree {degree} in the parameter)'
            else:
                entry['verified'] = True
                entry['image'] = normalize_point([v.coefficient(0) for v in image])
            results.append(entry)

        rejected = [r['curve'] for r in results if not r['verified']]
        if rejected:
            logger.info(f"⚠️ Not exceptional for {g.label or 'map'}: {rejected}")
        logger.info(f"✅ Exceptional curves of {g.label or 'map'}: "
                    f"{[r['curve'] for r in results if r['verified']]}")
        return results

    # ---- point orbits ---------------------------------------------------

    @staticmethod
    def _ledger_label(ledger: Optional[PlaneLedger], point: Sequence) -> Optional[str]:
        if ledger is None:
            return None
        for p in ledger.points:
            if p.parent is None and len(p.coordinates) == 3 and same_point(p.coordinates, point):
                return p.label
        return None

    def plane_point_orbit(self, g: BirationalMap, point: Sequence, n_max: Optional[int] = None,
                          ledger: Optional[PlaneLedger] = None, offset: int = 0) -> PlaneOrbit:
        """
        Exact forward orbit of a point until it repeats or meets indeterminacy

        Args:
            g: plane map
            point: starting point, index `offset` of the orbit
            n_max: number of iterates (config ORBIT_N_MAX by default)
            ledger: blowup ledger naming the points where the orbit may be continued
            offset: index of the starting point, 1 for the image of a curve

        Returns:
            PlaneOrbit tagged Periodic, HitsIndeterminacy or Open
        """
        n_max = n_max or self.config.ORBIT_N_MAX
        points = [normalize_point(point)]
        for _ in range(n_max):
            current = points[-1]
            image = g(current)
            if not any(image):
                step = offset + len(points) - 1
                label = self._ledger_label(ledger, current)
                logger.debug(f"orbit meets indeterminacy at step {step}")
                return PlaneOrbit(points, HITS_INDETERMINACY, step=step, blown_up=label)
            image = normalize_point(image)
            seen = next((k for k, p in enumerate(points) if p == image), None)
            if seen is not None:
                return PlaneOrbit(points, PERIODIC, step=offset + seen, period=len(points) - seen)
            points.append(image)
        return PlaneOrbit(points, OPEN)

    def curve_orbit(self, g: BirationalMap, label: str, curve: HomogPoly,
                    n_max: Optional[int] = None, ledger: Optional[PlaneLedger] = None) -> PlaneOrbit:
        """Orbit of the point an exceptional curve is contracted to; the image is step 1"""
        entry = self.plane_exceptional_verify(g, {label: curve})[0]
        if not entry['verified']:
            raise UnsupportedConfiguration(f"{label} is not contracted by {g.label}: {entry['residue']}")
        return self.plane_point_orbit(g, entry['image'], n_max, ledger, offset=1)

    def stability_witness(self, g: BirationalMap, ledger: PlaneLedger) -> List[Dict]:
        """
        Walk every ledger curve orbit and confirm it against the map

        Each declared point with plane coordinates must be the image of the
        previous one; the last plane point before the orbit ends or moves onto
        an exceptional divisor must be indeterminate or fixed.

        Returns:
            list of {curve, ok, detail}
        """
        out = []
        for curve in ledger.curves:
            if not curve.orbit:
                continue
            entry = self.plane_exceptional_verify(g, {curve.label: curve.equation})[0]
            if not entry['verified']:
                out.append({'curve': curve.label, 'ok': False, 'detail': entry['residue']})
                continue
            expected, ok, detail = entry['image'], True, 'orbit confirmed'
            for idx, label in enumerate(curve.orbit):
                point = ledger.point(label)
                if point.parent is not None or len(point.coordinates) != 3:
                    break
                if not same_point(point.coordinates, expected):
                    ok, detail = False, f'{label} is not the image {[str(v) for v in expected]}'
                    break
                image = g(expected)
                nxt = ledger.point(curve.orbit[idx + 1]) if idx + 1 < len(curve.orbit) else None
                ends_here = nxt is None or nxt.parent is not None or len(nxt.coordinates) != 3
                indeterminate = not any(image)
                if ends_here:
                    if not indeterminate and not same_point(image, expected):
                        ok, detail = False, f'{label} is regular and not fixed'
                    break
                if indeterminate:
                    ok, detail = False, f'{label} is indeterminate before the orbit ends'
                    break
                expected = normalize_point(image)
            out.append({'curve': curve.label, 'ok': ok, 'detail': detail})
        bad = [w['curve'] for w in out if not w['ok']]
        if bad:
            logger.error(f"❌ Stability witness fails for {ledger.name}: {bad}")
        else:
            logger.info(f"✅ Stability witness holds for {ledger.name}")
        return out

    # ---- Picard data ----------------------------------------------------

    @staticmethod
    def plane_pic_matrix(ledger: PlaneLedger) -> PicAction:
        """Pullback matrix whose columns are the ledger rules"""
        return PicAction.from_columns(ledger.basis, [ledger.column(c) for c in ledger.basis])

    @staticmethod
    def intersection(ledger: PlaneLedger, u: Sequence, v: Sequence):
        return ClassVector2D.of(ledger.basis, u).dot(ClassVector2D.of(ledger.basis, v))

    @staticmethod
    def form_check(action: PicAction) -> Dict:
        """Whether M^T J M = J for the form J = diag(1, -1, ..., -1)"""
        n = action.size
        form = np.diag([1] + [-1] * (n - 1)).astype(object)
        m = action.matrix
        pulled = m.T.dot(form).dot(m)
        deviation = (pulled - form).tolist()
        preserved = all(not x for row in deviation for x in row)
        return {'preserved': preserved, 'deviation': None if preserved else deviation}

    def theta_squared(self, ledger: PlaneLedger, growth: Optional[GrowthClass] = None) -> Optional[Dict]:
        """
        Self-intersection of the eigenclass of the dynamical degree

        The class is lam*H + ... with M theta = lam theta, computed over
        Q(lam) from a column of adj(M - lam I) and reduced modulo the minimal
        polynomial of lam.

        Returns:
            {expression, value, nonzero, factor}, or None without exponential growth
        """
        action = self.plane_pic_matrix(ledger)
        growth = growth or self.picard.growth_class(action)
        if growth.kind is not GrowthKind.EXPONENTIAL:
            return None
        report = self.picard.dynamical_degree(self.picard.char_poly_det(action))
        if report.value is None:
            return None
        minimal = report.factor.to_sympy().as_expr().subs(T, LAM)

        def reduce(expr):
            return sympy.rem(sympy.expand(expr), minimal, LAM)

        matrix = sympy.Matrix(action.matrix.tolist())
        adj = (matrix - LAM * sympy.eye(action.size)).adjugate(method='berkowitz')
        vector = None
        for j in range(action.size):
            column = [reduce(adj[i, j]) for i in range(action.size)]
            if column[0] != 0:
                vector = column
                break
        if vector is None:
            raise InconsistentLedger(f"{ledger.name}: eigenclass has no H component")
        scale = LAM * sympy.invert(vector[0], minimal, LAM)
        theta = [reduce(scale * x) for x in vector]
        square = reduce(ClassVector2D.of(ledger.basis, theta).dot(ClassVector2D.of(ledger.basis, theta)))
        value = float(square.subs(LAM, sympy.Float(report.approx, 30)))
        logger.info(f"🎯 theta^2 = {square} ~ {value:.6f} for {ledger.name}")
        return {
            'expression': str(square),
            'value': value,
            'nonzero': square != 0,
            'factor': report.factor.to_json(),
            'theta': [str(x) for x in theta],
        }

    @staticmethod
    def automorphism_verdict(growth: GrowthClass, salem: Optional[SalemVerdict] = None,
                             theta_sq: Optional[Dict] = None) -> AutomorphismVerdict:
        """
        Decide whether a plane map can be conjugate to an automorphism

        Exponential growth rules it out when the invariant class has nonzero
        self-intersection or the dynamical degree is not a Salem number.
        Linear growth rules it out. Bounded, periodic and quadratic growth
        leave it possible.
        """
        reasons = []
        if growth.kind is GrowthKind.EXPONENTIAL:
            if theta_sq is not None and theta_sq['nonzero']:
                reasons.append(f"invariant class has self-intersection {theta_sq['expression']} != 0")
            if salem is not None and not salem.is_salem:
                reasons.append(f"dynamical degree is not a Salem number: {salem.reason}")
            return AutomorphismVerdict(not reasons, reasons)
        if growth.kind is GrowthKind.LINEAR:
            return AutomorphismVerdict(False, ['degrees grow linearly'])
        notes = {
            GrowthKind.QUADRATIC: 'quadratic growth: the map preserves an elliptic fibration',
            GrowthKind.PERIODIC: f'pullback has finite order {growth.order}',
            GrowthKind.BOUNDED: 'bounded degrees',
        }
        return AutomorphismVerdict(True, [], notes[growth.kind])

    def analyze_ledger(self, ledger: PlaneLedger, n_max: Optional[int] = None,
                       degrees: bool = True) -> Dict:
        """
        Full planar pipeline for one ledger

        Returns:
            dict with matrix, char poly, growth, theta^2, Salem test, verdict,
            stability witness and the degree cross-check
        """
        logger.info(f"🚀 Planar analysis of {ledger.name}")
        action = self.plane_pic_matrix(ledger)
        poly = self.picard.char_poly_det(action)
        growth = self.picard.growth_class(action)
        salem = self.picard.salem_verdict(poly) if growth.kind is GrowthKind.EXPONENTIAL else None
        theta = self.theta_squared(ledger, growth)
        verdict = self.automorphism_verdict(growth, salem, theta)
        report = {
            'ledger': ledger.name,
            'matrix': action.to_dict(),
            'charpoly': poly.to_json(),
            'charpoly_matches': (ledger.expected_charpoly is None
                                 or poly == IntPoly.from_high(ledger.expected_charpoly)),
            'growth': growth.to_dict(),
            'salem': salem.to_dict() if salem is not None else None,
            'theta_squared': theta,
            'verdict': verdict.to_dict(),
            'form': self.form_check(action),
        }
        if ledger.expected_verdict and ledger.expected_verdict != verdict.label:
            logger.warning(f"⚠️ {ledger.name}: verdict {verdict.label}, ledger records {ledger.expected_verdict}")
        if ledger.curves:
            g = self.map_for(ledger)
            report['stability'] = self.stability_witness(g, ledger)
            if degrees:
                report['degrees'] = self.degree_check(g, ledger, n_max)
        return report

    # ---- degrees --------------------------------------------------------

    def plane_degrees(self, g: BirationalMap, n_max: Optional[int] = None) -> DegreeSequence:
        return self.birmap.iterate_degrees(g, n_max)

    def degree_check(self, g: BirationalMap, ledger: PlaneLedger, n_max: Optional[int] = None) -> Dict:
        """Symbolic degrees of g^n against the H-coefficients of M^n e_H"""
        n_max = n_max or self.config.N_MAX_DEGREES
        symbolic = self.plane_degrees(g, n_max).degrees
        predicted = self.picard.predicted_degrees(self.plane_pic_matrix(ledger), len(symbolic))
        agree = symbolic == predicted
        if agree:
            logger.info(f"✅ Degrees of {ledger.name} match the ledger: {symbolic}")
        else:
            logger.warning(f"⚠️ Degrees of {ledger.name} {symbolic} differ from the ledger {predicted}")
        return {'symbolic': symbolic, 'predicted': predicted, 'agree': agree}
