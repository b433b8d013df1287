"""
Birational Map Model
app/models/birational_map.py
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import HomogPoly, coordinate_vars


@dataclass(frozen=True)
class BirationalMap:
    """Gcd-reduced tuple of homogeneous components of equal degree"""
    components: Tuple[HomogPoly, ...]
    iterate: int = 1
    label: str = ''

    def __post_init__(self):
        comps = tuple(HomogPoly.from_sparse(c) if not isinstance(c, HomogPoly) else c
                      for c in self.components)
        object.__setattr__(self, 'components', comps)
        degrees = {c.total_degree() for c in comps if c.terms}
        if len(degrees) > 1:
            raise ValueError(f"components of different degrees {sorted(degrees)}")
        if not degrees:
            raise ValueError("the zero tuple is not a map")

    @classmethod
    def identity(cls, nvars: int = 4) -> 'BirationalMap':
        return cls(tuple(coordinate_vars(nvars)), iterate=0, label='identity')

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def degree(self) -> int:
        return max(c.total_degree() for c in self.components)

    def __call__(self, point: Sequence) -> List[CycNum]:
        return [c.evaluate(point) for c in self.components]

    def is_identity(self) -> bool:
        """Projective identity: every cross-product f_i x_j - f_j x_i vanishes"""
        xs = coordinate_vars(self.nvars)
        f = self.components
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                if not (f[i] * xs[j] - f[j] * xs[i]).is_zero():
                    return False
        return True

    def to_dict(self) -> Dict:
        return {
            'label': self.label,
            'iterate': self.iterate,
            'degree': self.degree,
            'components': [c.to_str() for c in self.components],
        }

    def __repr__(self):
        return f'<BirationalMap {self.label or "map"}^{self.iterate} degree {self.degree}>'


@dataclass(frozen=True)
class DegreeSequence:
    """deg(f^n) for n = 1..len(degrees); bound_exceeded flags a truncated run"""
    degrees: List[int] = field(default_factory=list)
    bound_exceeded: bool = False

    def to_dict(self) -> Dict:
        return {'degrees': list(self.degrees), 'bound_exceeded': self.bound_exceeded}


@dataclass(frozen=True)
class JacobianReport:
    """Exact Jacobian determinant and its factored form"""
    determinant: HomogPoly
    divisible_by: Dict[str, bool]
    cofactor: Optional[CycNum] = None

    def to_dict(self) -> Dict:
        return {
            'determinant': self.determinant.to_str(),
            'divisible_by': dict(self.divisible_by),
            'cofactor': self.cofactor.to_json() if self.cofactor is not None else None,
        }
