"""
Orbit Models
app/models/orbit.py

Chart-tagged elements of the blown-up space, orbit events and the orbit
signature (N, d-list, u-list, m_s) of the exceptional surface.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import SparsePoly
from app.exceptions import InconsistentSignature

PARAM_NAMES = ('t', 's', 'r')

# index of the blown-up point for each point divisor, and the pair of each line divisor
POINT_CENTERS = {'E1': 1, 'E2': 2, 'E3': 3}
LINE_CENTERS = {'S01': (0, 1), 'S02': (0, 2), 'S03': (0, 3)}


@dataclass(frozen=True)
class ChartId:
    """Chart label (P3, E1-E3, S01-S03), affine patch and lift level"""
    label: str
    patch: int = 0
    level: int = 1

    def __post_init__(self):
        if self.label != 'P3' and self.label not in POINT_CENTERS and self.label not in LINE_CENTERS:
            raise ValueError(f"unknown chart label {self.label}")

    @property
    def is_point_divisor(self) -> bool:
        return self.label in POINT_CENTERS

    @property
    def is_line_divisor(self) -> bool:
        return self.label in LINE_CENTERS

    def __str__(self):
        return self.label if self.level == 1 else f"{self.label}@{self.level}"


Vec = Tuple[SparsePoly, ...]


@dataclass(frozen=True)
class OrbitElement:
    """
    Point or parameterized family in a chart of the blown-up space

    base is the image point in P3; normal holds the transverse direction for
    divisor charts (slot j zero on E_j, only slots a, b used on S_ab);
    normal2 is the second-order direction of a level-2 element.
    """
    chart: ChartId
    base: Vec
    normal: Vec = ()
    normal2: Vec = ()
    nparams: int = 0

    @property
    def kind(self) -> str:
        return {0: 'Point', 1: 'Curve'}.get(self.nparams, 'Surface')

    def polys(self) -> List[SparsePoly]:
        return list(self.base) + list(self.normal) + list(self.normal2)

    def is_constant(self) -> bool:
        return all(p.is_constant() for p in self.polys())

    def specialize(self, values: Sequence[CycNum]) -> 'OrbitElement':
        """Point element at the given parameter values"""
        def at(vec):
            return tuple(SparsePoly.constant(0, p.evaluate(values)) for p in vec)
        return OrbitElement(self.chart, at(self.base), at(self.normal), at(self.normal2), 0)

    def point(self) -> List[CycNum]:
        """Base coordinates of a point element"""
        return [p.constant_value() for p in self.base]

    def to_dict(self) -> Dict:
        names = PARAM_NAMES[:self.nparams]
        data = {
            'chart': str(self.chart),
            'kind': self.kind,
            'coordinates': [p.to_str(names) for p in self.base],
        }
        if self.normal:
            data['normal'] = [p.to_str(names) for p in self.normal]
        if self.normal2:
            data['normal2'] = [p.to_str(names) for p in self.normal2]
        return data

    def __repr__(self):
        names = PARAM_NAMES[:self.nparams]
        coords = ' : '.join(p.to_str(names) for p in self.base)
        extra = ''
        if self.normal:
            extra = ' n=[' + ' : '.join(p.to_str(names) for p in self.normal) + ']'
        return f'<{self.kind} {self.chart} [{coords}]{extra}>'


class EventTag(Enum):
    ADVANCE = 'Advance'
    FIBER_OF_GAMMA = 'FiberOfGamma'
    BLOWUP_AT_BETA_GAMMA = 'BlowupAtSigmaBetaGamma'
    ENTER_SPECIAL_FIBER = 'EnterF0BetaGamma'
    TERMINATE = 'Terminate'
    HIT_FORBIDDEN = 'HitForbidden'


@dataclass(frozen=True)
class OrbitEvent:
    """One step of an orbit: tag and resulting element"""
    step: int
    tag: EventTag
    element: OrbitElement
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        data = {'step': self.step, 'tag': self.tag.value}
        data.update(self.element.to_dict())
        if self.detail:
            data['detail'] = dict(self.detail)
        return data


@dataclass(frozen=True)
class OrbitSignature:
    """Combinatorial record of the orbit of the exceptional surface"""
    N: int
    d_list: List[int] = field(default_factory=list)
    u_list: List[int] = field(default_factory=list)
    m_s: Optional[int] = None  # None means the special fiber is never entered
    whole_fiber: Optional[bool] = None
    trace: List[OrbitEvent] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.d_list)

    def validate(self, strict_shape: bool = True) -> 'OrbitSignature':
        """
        Check the shape rules used by the matrix builders

        Args:
            strict_shape: also require 1 < d1 < u1 < ... < dm < um < N

        Returns:
            self, for chaining
        """
        if self.N < 2:
            raise InconsistentSignature(f"N must be at least 2, got {self.N}")
        if len(self.d_list) != len(self.u_list):
            raise InconsistentSignature("d-list and u-list differ in length")
        for name, xs in (('d', self.d_list), ('u', self.u_list)):
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise InconsistentSignature(f"{name}-list is not strictly increasing")
            if any(x < 1 or x >= self.N for x in xs):
                raise InconsistentSignature(f"{name}-list entries must lie in [1, N)")
        if strict_shape and self.d_list:
            merged = []
            for d, u in zip(self.d_list, self.u_list):
                merged += [d, u]
            if merged[0] <= 1 or any(b <= a for a, b in zip(merged, merged[1:])):
                raise InconsistentSignature("events do not alternate d1 < u1 < d2 < ...")
        if self.m_s is not None:
            if self.m_s < 1 or self.m_s + 5 > self.N:
                raise InconsistentSignature(f"m_s = {self.m_s} incompatible with N = {self.N}")
            taken = set(self.d_list) | set(self.u_list)
            block = set(range(self.m_s, self.m_s + 5))
            if taken & block:
                raise InconsistentSignature("a d/u event falls inside the special-fiber block")
        return self

    def to_dict(self) -> Dict:
        return {
            'N': self.N,
            'd': list(self.d_list),
            'u': list(self.u_list),
            'm_s': self.m_s if self.m_s is not None else 'infinite',
            'whole_fiber': self.whole_fiber,
        }

    def __repr__(self):
        m_s = self.m_s if self.m_s is not None else 'inf'
        return f'<OrbitSignature N={self.N} d={self.d_list} u={self.u_list} m_s={m_s}>'


@dataclass(frozen=True)
class OrbitCertificate:
    """Finite orbit replay for a non-critical parameter case"""
    case: str
    inverse: bool
    atlas: str
    trace: List[OrbitElement]
    closure: str  # cycle, fixed_point, invariant_set, linear, indeterminate
    period: Optional[int] = None
    avoids_indeterminacy: bool = True
    note: str = ''

    def to_dict(self) -> Dict:
        return {
            'case': self.case,
            'map': 'inverse' if self.inverse else 'forward',
            'atlas': self.atlas,
            'closure': self.closure,
            'period': self.period,
            'avoids_indeterminacy': self.avoids_indeterminacy,
            'note': self.note,
            'trace': [e.to_dict() for e in self.trace],
        }
