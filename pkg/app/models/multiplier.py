"""
Invariant Polynomial Model
app/models/multiplier.py
"""
from dataclasses import dataclass, field
from typing import Dict, List

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import HomogPoly


@dataclass(frozen=True)
class MultiplierSolution:
    """Multiplier t and a basis of degree-d solutions of P o f = t j_f P"""
    multiplier: CycNum
    degree: int
    basis: List[HomogPoly] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_dict(self) -> Dict:
        return {
            'multiplier': self.multiplier.to_json(),
            'degree': self.degree,
            'dimension': self.dimension,
            'basis': [p.to_json() for p in self.basis],
        }

    def __repr__(self):
        return f'<MultiplierSolution t={self.multiplier} dim={self.dimension}>'


@dataclass(frozen=True)
class SingularityReport:
    """Gradient and Hessian test of a quartic at a point"""
    on_surface: bool
    gradient_vanishes: bool
    hessian_rank: int
    kind: str  # Smooth, A1, CorankOne, Degenerate

    def to_dict(self) -> Dict:
        return {
            'on_surface': self.on_surface,
            'gradient_vanishes': self.gradient_vanishes,
            'hessian_rank': self.hessian_rank,
            'type': self.kind,
        }
