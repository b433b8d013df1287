"""
Map Parameters Model
app/models/parameters.py

The (alpha, beta) parameters of the three-step linear-fractional family,
their derived linear forms and the classification record.
"""
from dataclasses import dataclass, field
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum, ZERO, common_order
from app.exceptions import DegenerateParameters

Vector = Tuple[CycNum, CycNum, CycNum, CycNum]


def _vector(values: Sequence) -> Vector:
    if len(values) != 4:
        raise DegenerateParameters(f"expected 4 coordinates, got {len(values)}")
    return tuple(CycNum.coerce(v) for v in values)


def dot(form: Sequence[CycNum], point: Sequence) -> CycNum:
    """form . point for exact vectors"""
    total = ZERO
    for a, x in zip(form, point):
        if a:
            total = total + a * CycNum.coerce(x)
    return total


@dataclass(frozen=True)
class MapParameters:
    """Parameters alpha, beta of f = [x0 b.x : x2 b.x : x3 b.x : x0 a.x]"""
    alpha: Vector
    beta: Vector

    def __post_init__(self):
        object.__setattr__(self, 'alpha', _vector(self.alpha))
        object.__setattr__(self, 'beta', _vector(self.beta))
        self.validate()

    @classmethod
    def of(cls, alpha: Sequence, beta: Sequence) -> 'MapParameters':
        return cls(tuple(alpha), tuple(beta))

    def validate(self):
        """Raise DegenerateParameters unless the family assumptions hold"""
        a, b = self.alpha, self.beta
        if not any(b[1:]):
            raise DegenerateParameters("beta is (beta0, 0, 0, 0)")
        if not a[1] and not b[1]:
            raise DegenerateParameters("alpha1 = beta1 = 0")
        proportional = all(
            a[i] * b[j] == a[j] * b[i] for i in range(4) for j in range(i + 1, 4)
        )
        if proportional:
            raise DegenerateParameters("alpha is a multiple of beta")

    # ---- derived forms --------------------------------------------------

    @property
    def gamma(self) -> Vector:
        """beta1 * alpha - alpha1 * beta"""
        a, b = self.alpha, self.beta
        return tuple(b[1] * a[i] - a[1] * b[i] for i in range(4))

    @property
    def B(self) -> Vector:
        return (-self.alpha[1], ZERO, ZERO, self.beta[1])

    @property
    def alpha_check(self) -> Vector:
        a = self.alpha
        return (a[0], a[2], a[3], ZERO)

    @property
    def beta_check(self) -> Vector:
        b = self.beta
        return (b[0], b[2], b[3], ZERO)

    @property
    def C(self) -> Vector:
        a1, b1 = self.alpha[1], self.beta[1]
        return tuple(b1 * x - a1 * y for x, y in zip(self.alpha_check, self.beta_check))

    @property
    def order(self) -> int:
        """Cyclotomic order of the coefficient field"""
        return common_order(self.alpha + self.beta)

    def is_critical(self) -> bool:
        a, b = self.alpha, self.beta
        return not b[2] and not b[3] and bool(b[1] * a[2] * a[3])

    def is_normalized(self) -> bool:
        """Critical normal form: beta = (b0,1,0,0), alpha1 = 0, alpha3 = 1"""
        a, b = self.alpha, self.beta
        return b[1].is_one() and not b[2] and not b[3] and not a[1] and a[3].is_one()

    # ---- encodings ------------------------------------------------------

    def to_dict(self) -> Dict:
        """Convert parameters to the parameter-file dictionary"""
        return {
            'cyclotomic_order': self.order,
            'alpha': [c.to_json() for c in self.alpha],
            'beta': [c.to_json() for c in self.beta],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'MapParameters':
        try:
            alpha = [CycNum.from_json(c) for c in data['alpha']]
            beta = [CycNum.from_json(c) for c in data['beta']]
        except KeyError as e:
            raise DegenerateParameters(f"missing field {e}")
        order = int(data.get('cyclotomic_order', 1))
        alpha = [c.with_order(lcm(order, c.order)) for c in alpha]
        beta = [c.with_order(lcm(order, c.order)) for c in beta]
        return cls(tuple(alpha), tuple(beta))

    def __repr__(self):
        alpha = ', '.join(str(c) for c in self.alpha)
        beta = ', '.join(str(c) for c in self.beta)
        return f'<MapParameters alpha=({alpha}) beta=({beta})>'


@dataclass(frozen=True)
class ConjugacyStep:
    """One linear-conjugacy action applied during normalization"""
    kind: str  # scale, diagonal, translate
    value: CycNum

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'value': self.value.to_json()}


@dataclass(frozen=True)
class ParamClass:
    """Classification tag: critical (with normal form) or a named non-critical case"""
    critical: bool
    label: str
    normalized: Optional[MapParameters] = None
    steps: List[ConjugacyStep] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {'tag': 'Critical' if self.critical else 'NonCritical', 'case': self.label}
        if self.normalized is not None:
            data['normalized'] = self.normalized.to_dict()
        if self.steps:
            data['steps'] = [s.to_dict() for s in self.steps]
        return data
