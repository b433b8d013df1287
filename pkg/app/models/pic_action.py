"""
Picard Action Models
app/models/pic_action.py
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from app.algebra.roots import AlgebraicReal
from app.algebra.univariate import IntPoly


@dataclass(frozen=True, eq=False)
class PicAction:
    """Integer pullback matrix on a labeled divisor-class basis (columns = images)"""
    labels: List[str]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=object)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"pullback matrix must be square, got shape {m.shape}")
        if m.shape[0] != len(self.labels):
            raise ValueError(f"{len(self.labels)} labels for a {m.shape[0]}x{m.shape[0]} matrix")
        object.__setattr__(self, 'matrix', m)
        object.__setattr__(self, 'labels', list(self.labels))

    @classmethod
    def from_rows(cls, labels: Sequence[str], rows: Sequence[Sequence[int]]) -> 'PicAction':
        return cls(list(labels), np.array([[int(x) for x in r] for r in rows], dtype=object))

    @classmethod
    def from_columns(cls, labels: Sequence[str], columns: Sequence[Sequence[int]]) -> 'PicAction':
        return cls(list(labels), np.array([[int(x) for x in c] for c in columns], dtype=object).T)

    @property
    def size(self) -> int:
        return len(self.labels)

    def image(self, label: str) -> Dict[str, int]:
        """Pullback of one basis class as {label: coefficient}"""
        col = self.matrix[:, self.labels.index(label)]
        return {lab: int(c) for lab, c in zip(self.labels, col) if c}

    def power(self, n: int) -> np.ndarray:
        result = np.identity(self.size, dtype=object)
        base = self.matrix
        while n:
            if n & 1:
                result = result.dot(base)
            n >>= 1
            if n:
                base = base.dot(base)
        return result

    def __eq__(self, other):
        if not isinstance(other, PicAction):
            return NotImplemented
        return self.labels == other.labels and bool((self.matrix == other.matrix).all())

    def to_dict(self) -> Dict:
        return {
            'basis': list(self.labels),
            'matrix': [[int(x) for x in row] for row in self.matrix],
        }

    def __repr__(self):
        return f'<PicAction {self.size}x{self.size} on {",".join(self.labels)}>'


class GrowthKind(Enum):
    PERIODIC = 'periodic'
    BOUNDED = 'bounded'
    LINEAR = 'linear'
    QUADRATIC = 'quadratic'
    EXPONENTIAL = 'exponential'


@dataclass(frozen=True)
class GrowthClass:
    """Degree-growth class of a pullback action"""
    kind: GrowthKind
    order: Optional[int] = None
    delta: Optional[AlgebraicReal] = None
    jordan_block: int = 1
    kernel_ranks: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {'kind': self.kind.value, 'jordan_block_at_1': self.jordan_block,
                'nullities': list(self.kernel_ranks)}
        if self.order is not None:
            data['order'] = self.order
        if self.delta is not None:
            data['delta'] = self.delta.to_json()
        return data


@dataclass(frozen=True)
class DegreeReport:
    """Largest root of a characteristic polynomial with its minimal factor"""
    value: Optional[AlgebraicReal]
    factor: Optional[IntPoly]
    cyclotomic_only: bool = False

    @property
    def approx(self) -> float:
        return self.value.approx if self.value is not None else 1.0

    def to_dict(self) -> Dict:
        return {
            'value': self.value.to_json() if self.value is not None else 1,
            'factor': self.factor.to_json() if self.factor is not None else None,
            'cyclotomic_only': self.cyclotomic_only,
        }


@dataclass(frozen=True)
class SalemVerdict:
    """Salem test outcome for the factor carrying the largest root"""
    is_salem: bool
    reason: str
    factor: Optional[IntPoly] = None
    value: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            'verdict': 'Salem' if self.is_salem else 'NotSalem',
            'reason': self.reason,
            'factor': self.factor.to_json() if self.factor is not None else None,
            'value': self.value,
        }
