"""
Univariate Polynomials
app/algebra/univariate.py

UniPoly: dense polynomials over cyclotomic fields (curve parameters, line
restrictions). IntPoly: integer polynomials in t (characteristic polynomials,
Sturm input). LaurentPoly: finite sums of c * t^k with k of either sign.
"""
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from app.algebra.cycnum import CycNum, ONE, ZERO

T = sympy.Symbol('t')


class UniPoly:
    """Dense univariate polynomial over CycNum, lowest degree first"""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs: Iterable = ()):
        cs = [CycNum.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, value) -> 'UniPoly':
        return cls([value])

    @classmethod
    def monomial(cls, k: int, value=1) -> 'UniPoly':
        return cls([0] * k + [value])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lead(self) -> CycNum:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coefficient(self, k: int) -> CycNum:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coefficient(k) + other.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> 'UniPoly':
        factor = CycNum.coerce(factor)
        return UniPoly(c * factor for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other: 'UniPoly') -> Tuple['UniPoly', 'UniPoly']:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = other.degree()
        lead_inv = other.lead().inv()
        quot = [ZERO] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * lead_inv
            quot[k - d] = q
            for i, b in enumerate(other.coeffs):
                if b:
                    rem[k - d + i] = rem[k - d + i] - q * b
        return UniPoly(quot), UniPoly(rem[:d] if d > 0 else [])

    def divide_exact(self, other: 'UniPoly') -> Optional['UniPoly']:
        q, r = self.divmod(other)
        return q if r.is_zero() else None

    def monic(self) -> 'UniPoly':
        if not self.coeffs:
            return self
        return self.scale(self.lead().inv())

    def derivative(self) -> 'UniPoly':
        return UniPoly(c * k for k, c in enumerate(self.coeffs) if k)

    def evaluate(self, x) -> CycNum:
        x = CycNum.coerce(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm"""
    while b:
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic()


def uni_gcd_many(polys: Sequence[UniPoly]) -> UniPoly:
    g = UniPoly()
    for p in polys:
        g = uni_gcd(g, p) if g else p.monic()
        if g.degree() == 0:
            break
    return g


class IntPoly:
    """Integer polynomial in t, lowest degree first"""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_high(cls, coeffs: Sequence[int]) -> 'IntPoly':
        """Build from coefficients listed highest degree first"""
        return cls(reversed(list(coeffs)))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> 'IntPoly':
        return cls([0] * k + [c])

    @classmethod
    def from_sympy(cls, poly) -> 'IntPoly':
        poly = sympy.Poly(poly, T)
        coeffs = poly.all_coeffs()
        if any(not c.is_integer for c in coeffs):
            raise ValueError(f"non-integer coefficient in {poly}")
        return cls.from_high([int(c) for c in coeffs])

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], T, domain='ZZ')

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def high(self) -> List[int]:
        return list(reversed(self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = IntPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def equal_up_to_sign(self, other: 'IntPoly') -> bool:
        return self == other or self == -other

    def reciprocal(self) -> 'IntPoly':
        """t^deg * p(1/t)"""
        return IntPoly(reversed(self.coeffs))

    def is_reciprocal(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def to_json(self) -> List[int]:
        return self.high()

    def __str__(self):
        return str(self.to_sympy().as_expr()) if self.coeffs else '0'

    def __repr__(self):
        return f"IntPoly({self})"


class LaurentPoly:
    """Finite Laurent polynomial sum c_k t^k with CycNum coefficients"""

    __slots__ = ('terms',)

    def __init__(self, terms: Optional[Dict[int, object]] = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = CycNum.coerce(c)
            if c:
                clean[int(k)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, k: int, c=1) -> 'LaurentPoly':
        return cls({k: c})

    @classmethod
    def geometric(cls, exponents: Iterable[int], c=1) -> 'LaurentPoly':
        """sum over exponents of c * t^k"""
        out = cls()
        for k in exponents:
            out = out + cls.monomial(k, c)
        return out

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = CycNum.coerce(other)
            return LaurentPoly({k: v * c for k, v in self.terms.items()})
        terms: Dict[int, CycNum] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                terms[k] = terms[k] + c1 * c2 if k in terms else c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return self.terms == other.terms

    def shift(self, k: int) -> 'LaurentPoly':
        """Multiply by t^k"""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def min_exponent(self) -> int:
        return min(self.terms) if self.terms else 0

    def max_exponent(self) -> int:
        return max(self.terms) if self.terms else 0

    def evaluate(self, x) -> CycNum:
        x = CycNum.coerce(x)
        return sum((c * x ** k for k, c in self.terms.items()), ZERO)

    def to_intpoly(self) -> IntPoly:
        """Integer polynomial of a Laurent polynomial with no negative exponents"""
        if self.terms and self.min_exponent() < 0:
            raise ValueError("negative exponents remain; shift first")
        coeffs = [0] * (self.max_exponent() + 1)
        for k, c in self.terms.items():
            f = c.to_fraction()
            if f.denominator != 1:
                raise ValueError(f"non-integer coefficient {f}")
            coeffs[k] = f.numerator
        return IntPoly(coeffs)

    def __repr__(self):
        body = ' + '.join(f"{c}*t^{k}" for k, c in sorted(self.terms.items(), reverse=True))
        return f"LaurentPoly({body or '0'})"
