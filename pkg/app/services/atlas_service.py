"""
Blowup Atlas Service
app/services/atlas_service.py

Chart-tagged elements of P3 blown up at coordinate points and lines, and
the resolve-by-series application of a map to them: lift the element with a
formal transverse variable eps, apply the map, read the leading eps terms
back into the chart of the image.
"""
import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum, ONE, ZERO
from app.algebra.mgcd import gcd_many
from app.algebra.polynomial import SparsePoly
from app.algebra.univariate import UniPoly, uni_gcd_many
from app.config import get_config
from app.exceptions import DirectionDependent, UnsupportedConfiguration
from app.models.birational_map import BirationalMap
from app.models.orbit import LINE_CENTERS, POINT_CENTERS, ChartId, OrbitElement

logger = logging.getLogger(__name__)

Vec = Tuple[SparsePoly, ...]


@dataclass(frozen=True)
class AtlasSpec:
    """Blown-up centers: coordinate points first, then coordinate lines in blowup order"""
    name: str
    points: Tuple[int, ...]
    lines: Tuple[Tuple[int, int], ...]

    def has_line(self, pair) -> bool:
        return tuple(sorted(pair)) in self.lines


ATLAS_Y = AtlasSpec('Y', (1, 3), ((0, 1), (0, 3)))
ATLAS_X = AtlasSpec('X', (1,), ((0, 3),))
ATLAS_Z = AtlasSpec('Z', (2,), ((0, 2),))
ATLAS_P3 = AtlasSpec('P3', (), ())
ATLASES = {a.name: a for a in (ATLAS_Y, ATLAS_X, ATLAS_Z, ATLAS_P3)}

# every blown-up line lies in x0 = 0, so two of them always share slot 0
SHARED_SLOT = 0


# ---- polynomial helpers -------------------------------------------------

def const(value, nvars: int) -> SparsePoly:
    return SparsePoly.constant(nvars, CycNum.coerce(value))


def as_poly(value, nvars: int) -> SparsePoly:
    if isinstance(value, SparsePoly):
        if value.nvars != nvars:
            raise ValueError(f"expected a polynomial in {nvars} parameters")
        return value.as_sparse()
    return const(value, nvars)


def extend(p: SparsePoly, extra: int = 1) -> SparsePoly:
    """Same polynomial with extra trailing variables"""
    return SparsePoly(p.nvars + extra, {m + (0,) * extra: c for m, c in p.terms.items()})


def eps_power(k: int, e: int) -> SparsePoly:
    return SparsePoly(k + 1, {(0,) * k + (e,): ONE})


def eps_order(p: SparsePoly) -> Optional[int]:
    if p.is_zero():
        return None
    return p.min_degree_in(p.nvars - 1)


def eps_coeff(p: SparsePoly, order: int) -> SparsePoly:
    """Coefficient of eps^order as a polynomial in the parameters"""
    k = p.nvars - 1
    return SparsePoly(k, {m[:-1]: c for m, c in p.terms.items() if m[-1] == order})


def primitive(vec: Sequence[SparsePoly]) -> Vec:
    """Divide out the common parameter content and make the first nonzero entry monic"""
    nonzero = [p for p in vec if p.terms]
    if not nonzero:
        raise ValueError("zero vector has no primitive form")
    if nonzero[0].nvars:
        g = gcd_many(nonzero)
        if not g.is_constant():
            vec = [p.divide_exact(g) if p.terms else p for p in vec]
    lead = next(p for p in vec if p.terms).leading()[1].inv()
    return tuple(p.scale(lead) for p in vec)


def to_uni(p: SparsePoly) -> UniPoly:
    """Univariate view of a polynomial in one parameter"""
    if p.nvars != 1:
        raise ValueError("expected a polynomial in one parameter")
    degree = max((m[0] for m in p.terms), default=-1)
    coeffs = [ZERO] * (degree + 1)
    for m, c in p.terms.items():
        coeffs[m[0]] = c
    return UniPoly(coeffs)


def cross_minors(u: Sequence, v: Sequence) -> List:
    return [u[i] * v[j] - u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u))]


def prune(element: OrbitElement) -> OrbitElement:
    """Drop parameters that no coordinate depends on"""
    k = element.nparams
    if not k:
        return element
    used = sorted({i for p in element.polys() for i in p.variables()})
    if len(used) == k:
        return element

    def squeeze(vec):
        return tuple(SparsePoly(len(used), {tuple(m[i] for i in used): c for m, c in p.terms.items()})
                     for p in vec)

    return OrbitElement(element.chart, squeeze(element.base), squeeze(element.normal),
                        squeeze(element.normal2), len(used))


class AtlasService:
    """Resolve-by-series engine for chart-tagged elements"""

    def __init__(self, config=None):
        """Initialize the atlas engine with the seeded random source"""
        self.config = config or get_config()
        self.rng = random.Random(self.config.SEED)

    # ---- element constructors -------------------------------------------

    def p3_element(self, coords: Sequence, nparams: int = 0) -> OrbitElement:
        base = primitive([as_poly(c, nparams) for c in coords])
        return prune(OrbitElement(ChartId('P3'), base, nparams=nparams))

    def line_element(self, p: Sequence, q: Sequence) -> OrbitElement:
        """Affine parameterization p + t q of the line through two points"""
        t = SparsePoly.variable(0, 1)
        return self.p3_element([const(a, 1) + t * CycNum.coerce(b) for a, b in zip(p, q)], 1)

    def plane_element(self, basis: Sequence[Sequence]) -> OrbitElement:
        """k + t l + s m for a basis (k, l, m) of a plane"""
        t, s = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
        k0, l0, m0 = basis
        coords = [const(a, 2) + t * CycNum.coerce(b) + s * CycNum.coerce(c) for a, b, c in zip(k0, l0, m0)]
        return self.p3_element(coords, 2)

    def divisor_element(self, label: str, base: Sequence, normal: Sequence,
                        normal2: Sequence = (), nparams: int = 0, level: int = 1) -> OrbitElement:
        """Element of a divisor chart from base point and transverse direction(s)"""
        chart = ChartId(label, level=level)
        b = primitive([as_poly(c, nparams) for c in base])
        n = primitive([as_poly(c, nparams) for c in normal])
        n2 = primitive([as_poly(c, nparams) for c in normal2]) if normal2 else ()
        return prune(OrbitElement(chart, b, n, n2, nparams))

    def from_chart(self, label: str, coords: Sequence, nparams: int = 0, patch: int = 0) -> OrbitElement:
        """
        Element on an exceptional divisor from affine chart coordinates

        Args:
            label: E1, E2, E3, S01, S02 or S03
            coords: the two chart coordinates on the divisor (transverse coordinate 0)
            nparams: number of parameters the coordinates depend on
            patch: 1 selects the (zeta0, zeta2) patch of E1

        Returns:
            OrbitElement in that chart
        """
        a, b = coords
        one = const(1, nparams)
        zero = const(0, nparams)
        a = as_poly(a, nparams)
        b = as_poly(b, nparams)
        if label == 'E3':
            base, normal = (zero, zero, zero, one), (one, a, b, zero)
        elif label == 'E1' and patch == 1:
            base, normal = (zero, one, zero, zero), (a, zero, b, one)
        elif label == 'E1':
            base, normal = (zero, one, zero, zero), (one, zero, a, b)
        elif label == 'E2':
            base, normal = (zero, zero, one, zero), (one, a, zero, b)
        elif label == 'S01':
            base, normal = (zero, zero, b, one), (one, a, zero, zero)
        elif label == 'S03':
            base, normal = (zero, one, a, zero), (one, zero, zero, b)
        elif label == 'S02':
            base, normal = (zero, a, zero, one), (one, zero, b, zero)
        else:
            raise UnsupportedConfiguration(f"no affine chart for {label}")
        return self.divisor_element(label, base, normal, nparams=nparams)

    def chart_coordinates(self, element: OrbitElement) -> List[Optional[CycNum]]:
        """Affine chart coordinates of a point element (None marks infinity)"""
        if element.nparams:
            raise UnsupportedConfiguration("chart coordinates are read from point elements")
        b = element.point()
        n = [p.constant_value() for p in element.normal]

        def ratio(x, y):
            return x / y if y else None

        label = element.chart.label
        if label == 'P3':
            return b
        table = {
            'E3': (ratio(n[1], n[0]), ratio(n[2], n[0])),
            'E1': (ratio(n[2], n[0]), ratio(n[3], n[0])),
            'E2': (ratio(n[1], n[0]), ratio(n[3], n[0])),
            'S01': (ratio(n[1], n[0]), ratio(b[2], b[3])),
            'S03': (ratio(b[2], b[1]), ratio(n[3], n[0])),
            'S02': (ratio(b[1], b[3]), ratio(n[2], n[0])),
        }
        return list(table[label])

    # ---- lifting ----------------------------------------------------------

    def _random_vector(self) -> List[CycNum]:
        return [CycNum.coerce(self.rng.randint(-20, 20) or 1) for _ in range(4)]

    def chart_to_p3(self, element: OrbitElement, perturbation: Optional[Sequence] = None,
                    tangent: Optional[Sequence] = None) -> List[SparsePoly]:
        """
        Lift an element to P3 with the transverse coordinate replaced by eps

        Args:
            element: chart-tagged element with k parameters
            perturbation: optional vector added at one eps order above the lift
            tangent: optional along-the-center move at order eps (line divisors)

        Returns:
            4 polynomials in k parameters and eps (last variable)
        """
        k = element.nparams
        eps = [eps_power(k, e) for e in range(4)]
        base = [extend(p) for p in element.base]
        chart = element.chart
        top = 1
        if chart.label == 'P3':
            lift = base
            top = 0
        elif chart.level == 1:
            normal = [extend(p) for p in element.normal]
            lift = [b + eps[1] * n for b, n in zip(base, normal)]
            if tangent is not None and chart.is_line_divisor:
                pair = LINE_CENTERS[chart.label]
                lift = [x if i in pair else x + eps[1] * CycNum.coerce(tangent[i])
                        for i, x in enumerate(lift)]
        else:
            normal = [extend(p) for p in element.normal]
            normal2 = [extend(p) for p in element.normal2]
            if chart.is_point_divisor:
                lift = [b + eps[1] * n + eps[2] * m for b, n, m in zip(base, normal, normal2)]
            else:
                # crossing of two blown-up lines: normal holds the first-line direction at order eps,
                # normal2 the second-line direction with the shared slot at order eps^2
                s = SHARED_SLOT
                lift = []
                for i in range(4):
                    x = base[i] + eps[1] * normal[i]
                    x = x + (eps[2] if i == s else eps[1]) * normal2[i]
                    lift.append(x)
            top = 2
        if perturbation is not None:
            lift = [x + eps_power(k, top + 1) * CycNum.coerce(w) for x, w in zip(lift, perturbation)]
        return lift

    # ---- reading an image arc ---------------------------------------------

    def read(self, image: Sequence[SparsePoly], atlas: AtlasSpec) -> OrbitElement:
        """Chart element of an eps-arc image (rules: point centers, then lines, else P3)"""
        k = image[0].nvars - 1
        orders = [eps_order(p) for p in image]
        finite = [o for o in orders if o is not None]
        if not finite:
            raise UnsupportedConfiguration("image arc vanishes identically")
        o = min(finite)
        base = primitive([eps_coeff(p, o) if orders[i] == o else const(0, k)
                          for i, p in enumerate(image)])

        def coeff_at(i, order):
            return eps_coeff(image[i], order) if orders[i] == order else const(0, k)

        support = [i for i in range(4) if base[i].terms]
        for j in atlas.points:
            if support != [j]:
                continue
            others = [i for i in range(4) if i != j and orders[i] is not None]
            if not others:
                raise DirectionDependent(f"arc collapses onto e{j} to all orders computed")
            o1 = min(orders[i] for i in others)
            normal = primitive([const(0, k) if i == j else coeff_at(i, o1) for i in range(4)])
            dir_support = [i for i in range(4) if normal[i].terms]
            if len(dir_support) == 1:
                c = dir_support[0]
                a, b = sorted(set(range(4)) - {j, c})
                if atlas.has_line((a, b)):
                    o2s = [orders[i] for i in (a, b) if orders[i] is not None]
                    if not o2s:
                        raise DirectionDependent(f"second-order direction on E{j} vanishes")
                    o2 = min(o2s)
                    n2 = primitive([coeff_at(i, o2) if i in (a, b) else const(0, k) for i in range(4)])
                    return prune(OrbitElement(ChartId(f"E{j}", level=2), base, normal, n2, k))
            return prune(OrbitElement(ChartId(f"E{j}"), base, normal, (), k))

        for idx, (a, b) in enumerate(atlas.lines):
            if base[a].terms or base[b].terms:
                continue
            transverse = [orders[i] for i in (a, b) if orders[i] is not None]
            if not transverse:
                raise DirectionDependent(f"arc stays inside Sigma{a}{b} to all orders computed")
            o1 = min(transverse)
            normal = primitive([coeff_at(i, o1) if i in (a, b) else const(0, k) for i in range(4)])
            later = [(c, d) for (c, d) in atlas.lines[idx + 1:] if len({a, b} & {c, d}) == 1]
            for (c, d) in later:
                shared = ({a, b} & {c, d}).pop()
                q = (set(range(4)) - {a, b, c, d}).pop()
                if support == [q] and not normal[shared].terms:
                    other = ({c, d} - {shared}).pop()
                    p = ({a, b} - {shared}).pop()
                    return prune(self._crossing(image, orders, k, base, normal, shared, p, q, other, c, d))
            label = f"S{a}{b}"
            return prune(OrbitElement(ChartId(label), base, normal, (), k))
        return prune(OrbitElement(ChartId('P3'), base, (), (), k))

    def _crossing(self, image, orders, k, base, normal, s, p, q, r, c, d) -> OrbitElement:
        """Level-2 element where the second blown-up line crosses the first line's divisor"""
        first = image[s] * image[q]
        second = image[p] * image[r]
        o_first, o_second = eps_order(first), eps_order(second)
        finite = [x for x in (o_first, o_second) if x is not None]
        if not finite:
            raise DirectionDependent("crossing direction vanishes")
        mm = min(finite)
        n2 = [const(0, k)] * 4
        n2[s] = eps_coeff(first, mm) if o_first == mm else const(0, k)
        n2[r] = eps_coeff(second, mm) if o_second == mm else const(0, k)
        return OrbitElement(ChartId(f"S{c}{d}", level=2), base, normal, primitive(n2), k)

    # ---- applying a map ---------------------------------------------------

    def _image_arc(self, f: BirationalMap, element: OrbitElement, with_perturbation: bool) -> List[SparsePoly]:
        perturbation = self._random_vector() if with_perturbation else None
        tangent = self._random_vector() if with_perturbation else None
        lift = self.chart_to_p3(element, perturbation, tangent)
        return [c.substitute(lift) for c in f.components]

    def apply_fY(self, f: BirationalMap, element: OrbitElement, atlas: AtlasSpec = ATLAS_Y) -> OrbitElement:
        """
        Image of an element under the map induced on the blown-up space

        Args:
            f: family map (or its inverse) on P3
            element: chart-tagged element in the atlas
            atlas: blown-up centers

        Returns:
            Image element, read in the chart of the divisor it lies on
        """
        first = self.read(self._image_arc(f, element, True), atlas)
        second = self.read(self._image_arc(f, element, True), atlas)
        if not self.same_locus(first, second):
            logger.debug(f"direction check failed: {first} vs {second}")
            raise DirectionDependent(f"image of {element} depends on the transverse direction")
        return first

    # ---- comparison -------------------------------------------------------

    def _random_values(self, k: int) -> List[CycNum]:
        return [CycNum.coerce(self.rng.randint(-50, 50)) for _ in range(k)]

    def contains(self, outer: OrbitElement, inner: OrbitElement) -> bool:
        """Random points of inner lie on outer (same chart)"""
        if outer.chart != inner.chart:
            return False
        for _ in range(2):
            point = inner.specialize(self._random_values(inner.nparams)) if inner.nparams else inner
            if not self._contains_point(outer, point):
                return False
        return True

    def _contains_point(self, outer: OrbitElement, point: OrbitElement) -> bool:
        vectors = [(outer.base, point.base), (outer.normal, point.normal), (outer.normal2, point.normal2)]
        if outer.nparams == 0:
            return all(not x for u, v in vectors for x in
                       cross_minors([p.constant_value() for p in u], [p.constant_value() for p in v]))
        if outer.nparams == 1:
            minors = []
            for u, v in vectors:
                vals = [p.constant_value() for p in v]
                minors += [to_uni(m) for m in cross_minors(list(u), vals)]
            nonzero = [m for m in minors if m]
            if not nonzero:
                return True
            return uni_gcd_many(nonzero).degree() > 0
        # surfaces: solve for two parameters by specializing the first one at random
        raise UnsupportedConfiguration("containment in a two-parameter family is not supported")

    def same_locus(self, x: OrbitElement, y: OrbitElement) -> bool:
        """Two elements describe the same point or family in the same chart"""
        if x.chart != y.chart or x.nparams != y.nparams:
            return False
        if x.nparams == 0:
            return self.contains(x, y)
        if x.nparams == 1:
            return self.contains(x, y) and self.contains(y, x)
        return all(p == q for p, q in zip(x.polys(), y.polys()))

    # ---- predicates used by orbit rules ----------------------------------

    @staticmethod
    def satisfies(element: OrbitElement, form: Sequence) -> bool:
        """Base of the element lies in the hyperplane form . x = 0 identically"""
        total = SparsePoly.zero(element.nparams)
        for c, p in zip(form, element.base):
            c = CycNum.coerce(c)
            if c:
                total = total + p.scale(c)
        return total.is_zero()

    @staticmethod
    def equals_point(element: OrbitElement, point: Sequence) -> bool:
        if element.nparams:
            return False
        return all(not x for x in cross_minors(element.point(), [CycNum.coerce(c) for c in point]))

    def point_in(self, f: BirationalMap, element: OrbitElement) -> bool:
        """A P3 point element lies in the indeterminacy locus of f"""
        return element.nparams == 0 and all(not v for v in f(element.point()))
