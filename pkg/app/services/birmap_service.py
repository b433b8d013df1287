"""
Birational Map Service
app/services/birmap_service.py

Construction of the family maps and their inverses, strict-transform
composition, degree sequences, periodicity certificates, Jacobians, the
linear-conjugacy actions and the parameter classification.
"""
import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum, ONE, ZERO
from app.algebra.linalg import kernel
from app.algebra.mgcd import gcd_reduce
from app.algebra.polynomial import HomogPoly, SparsePoly, coordinate_vars
from app.algebra.univariate import UniPoly, uni_gcd
from app.config import get_config
from app.exceptions import DegenerateParameters, DegreeBoundExceeded, UnsupportedConfiguration
from app.models.birational_map import BirationalMap, DegreeSequence, JacobianReport
from app.models.parameters import ConjugacyStep, MapParameters, ParamClass, dot
from app.services.atlas_service import ATLAS_Y, AtlasService

logger = logging.getLogger(__name__)

CRITICAL = 'critical'


def linear(form: Sequence, nvars: int = 4) -> HomogPoly:
    """HomogPoly of a coefficient vector"""
    return HomogPoly.linear_form(list(form)[:nvars])


def apply_to_univariate(components: Sequence[SparsePoly], values: Sequence[UniPoly]) -> List[UniPoly]:
    """Evaluate polynomial components at a tuple of univariate polynomials"""
    cache: List[Dict[int, UniPoly]] = [{0: UniPoly.constant(1)} for _ in values]

    def power(i: int, e: int) -> UniPoly:
        if e not in cache[i]:
            cache[i][e] = power(i, e - 1) * values[i]
        return cache[i][e]

    out = []
    for comp in components:
        acc = UniPoly()
        for mono, coeff in comp.terms.items():
            term = UniPoly.constant(coeff)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        out.append(acc)
    return out


def determinant(rows: List[List[SparsePoly]]) -> SparsePoly:
    """Laplace expansion along the first row"""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = SparsePoly.zero(rows[0][0].nvars)
    for j, entry in enumerate(rows[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = entry * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class BirationalMapService:
    """Family maps, composition, degrees, periods and parameter actions"""

    def __init__(self, config=None):
        """Initialize the map service with configuration caps and the seeded random source"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)

    # ---- construction ---------------------------------------------------

    def build_family_map(self, params: MapParameters) -> BirationalMap:
        """
        Build f = [x0 b.x : x2 b.x : x3 b.x : x0 a.x]

        Args:
            params: validated family parameters

        Returns:
            Degree-2 BirationalMap
        """
        x0, x1, x2, x3 = coordinate_vars()
        bx = linear(params.beta)
        ax = linear(params.alpha)
        comps, _ = gcd_reduce([x0 * bx, x2 * bx, x3 * bx, x0 * ax], rng=self.rng)
        return BirationalMap(comps, iterate=1, label='f')

    def build_family_inverse(self, params: MapParameters) -> BirationalMap:
        """f^-1 = [x0 B.x : x0 a'.x - x3 b'.x : x1 B.x : x2 B.x]"""
        x0, x1, x2, x3 = coordinate_vars()
        Bx = linear(params.B)
        comps = [x0 * Bx, x0 * linear(params.alpha_check) - x3 * linear(params.beta_check), x1 * Bx, x2 * Bx]
        comps, _ = gcd_reduce(comps, rng=self.rng)
        return BirationalMap(comps, iterate=-1, label='f')

    def special_forms(self, params: MapParameters) -> List[HomogPoly]:
        """x0, b.x, g.x, B.x, C.x: the factors that can appear in compositions"""
        forms = [coordinate_vars()[0], linear(params.beta), linear(params.gamma),
                 linear(params.B), linear(params.C)]
        return [p for p in forms if p.terms]

    # ---- composition ----------------------------------------------------

    def compose_reduce(self, f: BirationalMap, g: BirationalMap,
                       params: Optional[MapParameters] = None) -> BirationalMap:
        """
        Strict-transform composition f o g

        Args:
            f: outer map
            g: inner map, same number of variables
            params: family parameters supplying the candidate factors

        Returns:
            gcd-reduced composition
        """
        if f.nvars != g.nvars:
            raise ValueError(f"cannot compose maps on {f.nvars} and {g.nvars} variables")
        comps = [c.substitute(g.components) for c in f.components]
        forms = self.special_forms(params) if params is not None else coordinate_vars(f.nvars)
        candidates = [p.substitute(g.components) for p in forms] + list(forms)
        reduced, removed = gcd_reduce(comps, candidates, rng=self.rng)
        if not removed.is_constant():
            logger.debug(f"composition dropped a factor of degree {removed.total_degree()}")
        return BirationalMap(reduced, iterate=f.iterate + g.iterate, label=f.label or g.label)

    def iterate_map(self, f: BirationalMap, n: int, params: Optional[MapParameters] = None) -> BirationalMap:
        """f^n by repeated strict-transform composition"""
        result = BirationalMap.identity(f.nvars)
        for _ in range(n):
            result = self.compose_reduce(f, result, params)
            if result.degree > self.config.DEGREE_BOUND:
                raise DegreeBoundExceeded(self.config.DEGREE_BOUND, [result.degree])
        return result

    # ---- degree growth --------------------------------------------------

    def _random_line(self, nvars: int) -> Tuple[List[CycNum], List[CycNum]]:
        p = [CycNum.coerce(self.rng.randint(-30, 30)) for _ in range(nvars)]
        q = [CycNum.coerce(self.rng.randint(-30, 30)) for _ in range(nvars)]
        return p, q

    @staticmethod
    def _strip_common(values: List[UniPoly], rng: random.Random) -> List[UniPoly]:
        """Divide univariate tuple by its gcd (random-combination gcd, verified)"""
        nonzero = [v for v in values if v]
        combo = UniPoly()
        for v in nonzero[1:]:
            combo = combo + v.scale(rng.randint(1, 97))
        g = uni_gcd(nonzero[0], combo) if combo else nonzero[0].monic()
        if g.degree() > 0:
            quotients = [v.divide_exact(g) if v else v for v in values]
            if any(q is None for q in quotients):
                g = nonzero[0].monic()
                for v in nonzero[1:]:
                    g = uni_gcd(g, v)
                quotients = [v.divide_exact(g) if v else v for v in values]
            values = quotients
        return values

    def _line_orbit(self, f: BirationalMap, n_max: int, line=None):
        """Yield (n, reduced degree, restricted tuple) for f^n on a random line"""
        nvars = f.nvars
        p, q = line or self._random_line(nvars)
        current = [UniPoly([a, b]) for a, b in zip(p, q)]
        for n in range(1, n_max + 1):
            image = self._strip_common(apply_to_univariate(f.components, current), self.rng)
            # a common factor of the binary forms at s = infinity shows up as a degree drop
            current = image
            yield n, max(v.degree() for v in image if v), current

    def iterate_degrees(self, f: BirationalMap, n_max: Optional[int] = None) -> DegreeSequence:
        """
        Exact degrees of the gcd-reduced iterates f^n, n = 1..n_max

        Args:
            f: family member or plane map
            n_max: number of iterates (config N_MAX_DEGREES by default)

        Returns:
            DegreeSequence, flagged when the configured degree bound stops the run
        """
        n_max = n_max or self.config.N_MAX_DEGREES
        bound = self.config.DEGREE_BOUND
        logger.info(f"🎯 Computing degrees of {f.label or 'map'} up to n={n_max}")
        runs = []
        for _ in range(2):
            degrees = []
            for n, degree, _values in self._line_orbit(f, n_max):
                degrees.append(degree)
                if degree > bound:
                    break
            runs.append(degrees)
        length = min(len(r) for r in runs)
        degrees = [max(r[i] for r in runs) for i in range(length)]
        exceeded = any(d > bound for d in degrees)
        if exceeded:
            degrees = [d for d in degrees if d <= bound]
            logger.warning(f"⚠️ Degree bound {bound} exceeded after {len(degrees)} iterates")
        else:
            logger.info(f"✅ Degrees: {degrees}")
        return DegreeSequence(degrees, exceeded)

    # ---- periodicity ----------------------------------------------------

    def period_of(self, f: BirationalMap, p_max: Optional[int] = None,
                  params: Optional[MapParameters] = None) -> Optional[int]:
        """
        Least p <= p_max with f^p = identity, certified by full composition

        Args:
            f: map to test
            p_max: search cap (config P_MAX by default)
            params: family parameters for the composition candidates

        Returns:
            The period, or None when no p <= p_max works
        """
        p_max = p_max or self.config.P_MAX
        line = self._random_line(f.nvars)
        start = [UniPoly([a, b]) for a, b in zip(*line)]
        for n, degree, values in self._line_orbit(f, p_max, line):
            if degree > self.config.DEGREE_BOUND:
                logger.info(f"✅ Degree bound reached at n={n}; no period up to {p_max}")
                return None
            if degree != 1 or not self._proportional(values, start):
                continue
            logger.info(f"🎯 Line screen suggests period {n}; certifying")
            if self.iterate_map(f, n, params).is_identity():
                logger.info(f"✅ Period {n} certified")
                return n
            logger.warning(f"⚠️ Line screen passed at n={n} but f^{n} is not the identity")
        return None

    @staticmethod
    def _proportional(a: Sequence[UniPoly], b: Sequence[UniPoly]) -> bool:
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if not (a[i] * b[j] - a[j] * b[i]).is_zero():
                    return False
        return True

    # ---- Jacobian -------------------------------------------------------

    def jacobian(self, f: BirationalMap) -> SparsePoly:
        """Exact determinant of the matrix of partial derivatives"""
        rows = [[c.partial(j) for j in range(f.nvars)] for c in f.components]
        return determinant(rows)

    def factored_form(self, params: MapParameters) -> JacobianReport:
        """Check the Jacobian is cofactor * x0 (g.x) (b.x)^2"""
        f = self.build_family_map(params)
        det = self.jacobian(f)
        remaining = det
        divisible = {}
        for name, factor in (('x0', coordinate_vars()[0]),
                             ('gamma.x', linear(params.gamma)),
                             ('(beta.x)^2', linear(params.beta) ** 2)):
            q = remaining.divide_exact(factor) if factor.terms else None
            divisible[name] = q is not None
            if q is not None:
                remaining = q
        cofactor = remaining.constant_value() if remaining.is_constant() else None
        return JacobianReport(HomogPoly.from_sparse(det), divisible, cofactor)

    # ---- conjugacy actions ----------------------------------------------

    @staticmethod
    def scale(params: MapParameters, lam) -> MapParameters:
        lam = CycNum.coerce(lam)
        return MapParameters(tuple(lam * a for a in params.alpha), tuple(lam * b for b in params.beta))

    @staticmethod
    def diagonal(params: MapParameters, c) -> MapParameters:
        """Conjugate by z = c w"""
        c = CycNum.coerce(c)
        a, b = params.alpha, params.beta
        return MapParameters(
            (a[0], c * a[1], c * a[2], c * a[3]),
            (c * b[0], c * c * b[1], c * c * b[2], c * c * b[3]),
        )

    @staticmethod
    def translate(params: MapParameters, mu) -> MapParameters:
        """Conjugate by z = w + mu"""
        mu = CycNum.coerce(mu)
        a, b = params.alpha, params.beta
        b0 = b[0] + mu * (b[1] + b[2] + b[3])
        a0 = a[0] + mu * (a[1] + a[2] + a[3]) - mu * b0
        return MapParameters(
            (a0, a[1] - mu * b[1], a[2] - mu * b[2], a[3] - mu * b[3]),
            (b0, b[1], b[2], b[3]),
        )

    def apply_conjugacy(self, params: MapParameters, lam=None, c=None, mu=None) -> MapParameters:
        """Scaling, diagonal and translation actions, applied in that order"""
        if lam is not None:
            params = self.scale(params, lam)
        if c is not None:
            params = self.diagonal(params, c)
        if mu is not None:
            params = self.translate(params, mu)
        return params

    def normalize_critical(self, params: MapParameters) -> Tuple[MapParameters, List[ConjugacyStep]]:
        """Bring a critical map to beta = (b0,1,0,0), alpha = (a0,0,a2,1)"""
        steps = []
        p = params
        lam = p.beta[1].inv()
        p = self.scale(p, lam)
        steps.append(ConjugacyStep('scale', lam))
        mu = p.alpha[1]
        p = self.translate(p, mu)
        steps.append(ConjugacyStep('translate', mu))
        c = p.alpha[3]
        p = self.diagonal(p, c)
        steps.append(ConjugacyStep('diagonal', c))
        lam = (c * c).inv()
        p = self.scale(p, lam)
        steps.append(ConjugacyStep('scale', lam))
        return p, steps

    def conjugate_inverse_params(self, params: MapParameters) -> MapParameters:
        """Critical parameters of the map conjugate to f^-1 by x1 <-> x3, normalized"""
        if not params.is_critical():
            raise DegenerateParameters("the inverse conjugation needs a critical map")
        p, _ = self.normalize_critical(params)
        a0, _, a2, _ = p.alpha
        b0 = p.beta[0]
        swapped = MapParameters((a0, -b0, ONE, a2), (ZERO, ONE, ZERO, ZERO))
        return self.normalize_critical(swapped)[0]

    # ---- classification -------------------------------------------------

    def classify_parameters(self, params: MapParameters) -> ParamClass:
        """
        Critical normal form, or the name of the non-critical case

        Args:
            params: validated family parameters

        Returns:
            ParamClass tag
        """
        a, b = params.alpha, params.beta
        if params.is_critical():
            normalized, steps = self.normalize_critical(params)
            logger.info(f"✅ Critical map; normal form {normalized}")
            return ParamClass(True, CRITICAL, normalized, steps)
        if not b[1]:
            if b[3]:
                if b[2]:
                    label = 'beta1_zero_beta3_beta2_nonzero'
                elif not a[2]:
                    label = 'beta1_zero_beta2_zero_alpha2_zero'
                else:
                    label = 'beta1_zero_beta2_zero_alpha2_nonzero'
            else:
                label = 'beta1_zero_beta3_zero'
            return ParamClass(False, label)
        p = self.scale(params, b[1].inv())
        p = self.translate(p, p.alpha[1])
        if p.beta[3]:
            label = 'sigma0_preperiodic_beta3_nonzero'
        elif p.beta[2]:
            label = 'sigma0_preperiodic_beta3_zero'
        elif p.alpha[2] and not p.alpha[3]:
            label = 'alpha3_zero'
        elif p.alpha[3] and not p.alpha[2]:
            label = 'alpha2_zero'
        else:
            label = 'linear'
        return ParamClass(False, label, p)

    def is_generic(self, params: MapParameters) -> bool:
        """beta1 != 0, beta1 alpha2 != alpha1 beta2, beta1 alpha3 != alpha1 beta3"""
        a, b = params.alpha, params.beta
        return bool(b[1]) and b[1] * a[2] != a[1] * b[2] and b[1] * a[3] != a[1] * b[3]

    # ---- exceptional sets -----------------------------------------------

    def _random_point_on(self, forms: Sequence[Sequence]) -> List[CycNum]:
        """Random point of the linear subspace cut out by the given forms"""
        basis = kernel([list(f) for f in forms], 4)
        point = [ZERO] * 4
        for vec in basis:
            c = CycNum.coerce(self.rng.randint(1, 50))
            point = [x + c * v for x, v in zip(point, vec)]
        return point

    @staticmethod
    def vanishes(f: BirationalMap, point: Sequence) -> bool:
        return all(not v for v in f(point))

    def indeterminacy_sets(self, params: MapParameters) -> Dict[str, Dict[str, bool]]:
        """
        I(f) = S_bg u S_0b u {e1} and I(f^-1) = S_0B u S_BC u {e3}, each verified

        Returns:
            {'forward': {piece: verified}, 'inverse': {piece: verified}}
        """
        f = self.build_family_map(params)
        g = self.build_family_inverse(params)
        e0 = (ONE, ZERO, ZERO, ZERO)
        forward = {
            'Sigma_beta_gamma': [params.beta, params.gamma],
            'Sigma_0_beta': [e0, params.beta],
            'e1': [e0, (ZERO, ZERO, ONE, ZERO), (ZERO, ZERO, ZERO, ONE)],
        }
        inverse = {
            'Sigma_0_B': [e0, params.B],
            'Sigma_B_C': [params.B, params.C],
            'e3': [e0, (ZERO, ONE, ZERO, ZERO), (ZERO, ZERO, ONE, ZERO)],
        }
        out = {'forward': {}, 'inverse': {}}
        for key, m, pieces in (('forward', f, forward), ('inverse', g, inverse)):
            for name, forms in pieces.items():
                out[key][name] = all(self.vanishes(m, self._random_point_on(forms)) for _ in range(2))
        return out

    def in_indeterminacy(self, params: MapParameters, point: Sequence, inverse: bool = False) -> bool:
        m = self.build_family_inverse(params) if inverse else self.build_family_map(params)
        return self.vanishes(m, point)

    def exceptional_images(self, params: MapParameters) -> List[Dict]:
        """
        Images of the exceptional hypersurfaces of f and f^-1, checked at random points

        Returns:
            list of {map, source, image, verified}
        """
        f = self.build_family_map(params)
        g = self.build_family_inverse(params)
        e0 = (ONE, ZERO, ZERO, ZERO)
        r = lambda: CycNum.coerce(self.rng.randint(1, 40))
        l2, l3 = r(), r()
        m1, m2 = r(), r()
        # {l2 x2 = l3 x3} and {m1 x1 = m2 x2} as linear forms
        lam_form = (ZERO, ZERO, l2, -l3)
        mu_form = (ZERO, m1, -m2, ZERO)
        results = []

        def record(which, source, image, ok):
            results.append({'map': which, 'source': source, 'image': image, 'verified': bool(ok)})

        y = f(self._random_point_on([params.beta]))
        record('f', 'Sigma_beta', 'e3', not y[0] and not y[1] and not y[2] and y[3])
        y = f(self._random_point_on([e0, lam_form]))
        record('f', 'Sigma_0 & {l2 x2 = l3 x3}', '[0:l3:l2:0]',
               not y[0] and not y[3] and l2 * y[1] == l3 * y[2])
        y = f(self._random_point_on([params.gamma, lam_form]))
        record('f', 'Sigma_gamma & {l2 x2 = l3 x3}', 'Sigma_BC & {l2 x1 = l3 x2}',
               not dot(params.B, y) and not dot(params.C, y) and l2 * y[1] == l3 * y[2])
        y = g(self._random_point_on([params.B]))
        record('f^-1', 'Sigma_B', 'e1', not y[0] and y[1] and not y[2] and not y[3])
        y = g(self._random_point_on([e0, mu_form]))
        record('f^-1', 'Sigma_0 & {m1 x1 = m2 x2}', 'Sigma_0beta & {m1 x2 = m2 x3}',
               not y[0] and not dot(params.beta, y) and m1 * y[2] == m2 * y[3])
        y = g(self._random_point_on([params.C, mu_form]))
        record('f^-1', 'Sigma_C & {m1 x1 = m2 x2}', 'Sigma_betagamma & {m1 x2 = m2 x3}',
               not dot(params.beta, y) and not dot(params.gamma, y) and m1 * y[2] == m2 * y[3])
        failed = [r['source'] for r in results if not r['verified']]
        if failed:
            logger.warning(f"⚠️ Exceptional images not confirmed for {failed}")
        return results

    # ---- the affine recurrence ------------------------------------------

    @staticmethod
    def recurrence_step(params: MapParameters, state: Sequence) -> Optional[CycNum]:
        """z3 = (a0 + a1 z0 + a2 z1 + a3 z2) / (b0 + b1 z0 + b2 z1 + b3 z2), None at a pole"""
        point = [ONE] + [CycNum.coerce(z) for z in state]
        den = dot(params.beta, point)
        if not den:
            return None
        return dot(params.alpha, point) / den

    def recurrence_period(self, params: MapParameters, seed: Sequence,
                          p_max: Optional[int] = None) -> Optional[int]:
        """Least p <= p_max returning the state (z0, z1, z2) to itself"""
        p_max = p_max or self.config.P_MAX
        start = tuple(CycNum.coerce(z) for z in seed)
        state = start
        for p in range(1, p_max + 1):
            nxt = self.recurrence_step(params, state)
            if nxt is None:
                logger.warning(f"⚠️ Recurrence hit a pole at step {p}")
                return None
            state = state[1:] + (nxt,)
            if state == start:
                return p
        return None

    # ---- rotor restriction ----------------------------------------------

    def restrict_to_plane(self, params: MapParameters, plane: int = 3, steps: int = 8,
                          cross_check: bool = True) -> BirationalMap:
        """
        Return map of a coordinate plane carried around the rotor cycle

        The plane {x_plane = 0} is pushed through the blown-up space one
        step at a time, so the contractions onto e3 and the coordinate lines
        are resolved by the chart formulas instead of by pointwise iteration.

        Args:
            params: critical family parameters with beta = (0, 1, 0, 0)
            plane: index of the coordinate plane
            steps: length of the cycle (8 for the rotor)
            cross_check: compare with the gcd-reduced 3D iterate at random points

        Returns:
            BirationalMap in the 3 remaining coordinates
        """
        atlas = AtlasService(self.config)
        f = self.build_family_map(params)
        others = [i for i in range(4) if i != plane]
        t, s = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
        coords = [SparsePoly.zero(2)] * 4
        coords[others[0]] = SparsePoly.constant(2, 1)
        coords[others[1]] = t
        coords[others[2]] = s
        element = atlas.p3_element(coords, 2)
        logger.info(f"🎯 Pushing Sigma{plane} through {steps} steps of the rotor")
        for _ in range(steps):
            element = atlas.apply_fY(f, element, ATLAS_Y)
            logger.debug(f"rotor step -> {element.chart}")
        form = [ZERO] * 4
        form[plane] = ONE
        if element.chart.label != 'P3' or element.nparams != 2 or not atlas.satisfies(element, form):
            raise UnsupportedConfiguration(f"Sigma{plane} is not invariant under f^{steps}: landed in {element.chart}")

        images = [element.base[i] for i in others]
        top = max(p.total_degree() for p in images)
        homogenized = []
        for p in images:
            terms = {(top - sum(m), m[0], m[1]): c for m, c in p.terms.items()}
            homogenized.append(HomogPoly(3, terms))
        comps, _ = gcd_reduce(homogenized, coordinate_vars(3), rng=self.rng)
        g = BirationalMap(comps, iterate=steps, label=f'f^{steps}|Sigma{plane}')
        logger.info(f"✅ Restriction to Sigma{plane} has degree {g.degree}")
        if cross_check:
            self._check_restriction(f, g, params, plane, steps)
        return g

    def _check_restriction(self, f: BirationalMap, g: BirationalMap, params: MapParameters,
                           plane: int, steps: int):
        h = self.iterate_map(f, steps, params)
        for _ in range(3):
            point3 = [CycNum.coerce(self.rng.randint(1, 60)) for _ in range(3)]
            point = list(point3)
            point.insert(plane, ZERO)
            full = h(point)
            if full[plane]:
                raise UnsupportedConfiguration(f"f^{steps} does not preserve Sigma{plane}")
            image = [v for i, v in enumerate(full) if i != plane]
            mine = g(point3)
            if not any(image) or not any(mine):
                continue
            if any(image[i] * mine[j] != image[j] * mine[i] for i in range(3) for j in range(i + 1, 3)):
                raise UnsupportedConfiguration("chart-level restriction disagrees with the 3D iterate")
        logger.info(f"✅ Restriction matches f^{steps} at random points")
