"""
Planar Blowup Ledger Model
app/models/plane_ledger.py

Declarative record of the points blown up to regularize a plane birational
map: the points, the exceptional curves with their orbits, and the pullback
rule of every basis class.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import HomogPoly
from app.exceptions import InconsistentLedger


@dataclass(frozen=True)
class LedgerPoint:
    """Blown-up point; parent names the divisor of an infinitely near point"""
    label: str
    coordinates: List[CycNum]
    parent: Optional[str] = None

    def to_dict(self) -> Dict:
        data = {'label': self.label, 'coordinates': [c.to_json() for c in self.coordinates]}
        if self.parent:
            data['parent'] = self.parent
        return data


@dataclass(frozen=True)
class LedgerCurve:
    """Exceptional curve and the orbit of points it is contracted along"""
    label: str
    equation: HomogPoly
    orbit: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {'label': self.label, 'equation': self.equation.to_json(), 'orbit': list(self.orbit)}


@dataclass(frozen=True)
class PlaneLedger:
    """Blowup ledger of one plane map"""
    name: str
    basis: List[str]
    rules: Dict[str, Dict[str, int]]
    points: List[LedgerPoint] = field(default_factory=list)
    curves: List[LedgerCurve] = field(default_factory=list)
    a: Optional[CycNum] = None
    kind: str = 'cubic'  # cubic, lyness, cube_root
    expected_charpoly: Optional[List[int]] = None
    expected_verdict: Optional[str] = None

    def __post_init__(self):
        if not self.basis or self.basis[0] != 'H':
            raise InconsistentLedger(f"{self.name}: basis must start with H")
        if len(set(self.basis)) != len(self.basis):
            raise InconsistentLedger(f"{self.name}: repeated basis labels")
        for cls, image in self.rules.items():
            if cls not in self.basis:
                raise InconsistentLedger(f"{self.name}: rule for unknown class {cls}")
            unknown = set(image) - set(self.basis)
            if unknown:
                raise InconsistentLedger(f"{self.name}: rule {cls} uses unknown classes {sorted(unknown)}")
        missing = [b for b in self.basis if b not in self.rules]
        if missing:
            raise InconsistentLedger(f"{self.name}: no pullback rule for {missing}")
        labels = {p.label for p in self.points}
        for curve in self.curves:
            bad = [p for p in curve.orbit if p not in labels]
            if bad:
                raise InconsistentLedger(f"{self.name}: curve {curve.label} visits undeclared points {bad}")

    def column(self, cls: str) -> List[int]:
        rule = self.rules[cls]
        return [int(rule.get(b, 0)) for b in self.basis]

    def point(self, label: str) -> LedgerPoint:
        for p in self.points:
            if p.label == label:
                return p
        raise InconsistentLedger(f"{self.name}: no point {label}")

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'a': self.a.to_json() if self.a is not None else None,
            'kind': self.kind,
            'basis': list(self.basis),
            'rules': [{'class': c, 'pullback': dict(self.rules[c])} for c in self.basis],
            'points': [p.to_dict() for p in self.points],
            'curves': [c.to_dict() for c in self.curves],
            'expected_charpoly': self.expected_charpoly,
            'expected_verdict': self.expected_verdict,
        }

    def __repr__(self):
        return f'<PlaneLedger {self.name} basis={",".join(self.basis)}>'


@dataclass(frozen=True)
class ClassVector2D:
    """Divisor class on a blown-up plane: H^2 = 1, E_i^2 = -1, mixed products 0"""
    basis: List[str]
    coeffs: List

    def dot(self, other: 'ClassVector2D'):
        if self.basis != other.basis:
            raise ValueError("classes live on different bases")
        total = 0
        for label, a, b in zip(self.basis, self.coeffs, other.coeffs):
            total = total + (a * b if label == 'H' else -(a * b))
        return total

    @classmethod
    def of(cls, basis: Sequence[str], coeffs: Sequence) -> 'ClassVector2D':
        return cls(list(basis), list(coeffs))


@dataclass(frozen=True)
class PlaneOrbit:
    """Exact forward orbit of a plane point and how it ended"""
    points: List[List[CycNum]]
    tag: str  # Periodic, HitsIndeterminacy, Open
    step: Optional[int] = None
    period: Optional[int] = None
    blown_up: Optional[str] = None

    def to_dict(self) -> Dict:
        data = {'tag': self.tag, 'points': [[str(c) for c in p] for p in self.points]}
        if self.step is not None:
            data['step'] = self.step
        if self.period is not None:
            data['period'] = self.period
        if self.blown_up:
            data['blown_up'] = self.blown_up
        return data


@dataclass(frozen=True)
class AutomorphismVerdict:
    """Whether the plane map can be conjugate to an automorphism"""
    possible: bool
    reasons: List[str] = field(default_factory=list)
    note: str = ''

    @property
    def label(self) -> str:
        return 'ConjugateToAutomorphismPossible' if self.possible else 'NotConjugate'

    def to_dict(self) -> Dict:
        data = {'verdict': self.label, 'reasons': list(self.reasons)}
        if self.note:
            data['note'] = self.note
        return data
