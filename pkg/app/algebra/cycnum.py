"""
Cyclotomic Field Elements
app/algebra/cycnum.py

Exact elements of Q(zeta_n) kept as an integer coordinate vector over one
positive denominator, reduced modulo the n-th cyclotomic polynomial. Mixed
orders are combined in Q(zeta_lcm).
"""
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import mpmath
import sympy

_X = sympy.Symbol('x')


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first"""
    poly = sympy.Poly(sympy.cyclotomic_poly(n, _X), _X)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1


def _mobius(m: int) -> int:
    exps = sympy.factorint(m).values()
    if any(e > 1 for e in exps):
        return 0
    return -1 if len(exps) % 2 else 1


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> Tuple[Fraction, ...]:
    # normalized trace of zeta_n^k is mu(n/g) / phi(n/g) with g = gcd(n, k)
    weights = []
    for k in range(totient(n)):
        m = n // math.gcd(n, k)
        weights.append(Fraction(_mobius(m), totient(m)))
    return tuple(weights)


def _reduce(vec: List[int], n: int) -> List[int]:
    """Reduce an integer vector (a polynomial in zeta) modulo the monic Phi_n"""
    phi = cyclotomic_coeffs(n)
    d = len(phi) - 1
    for k in range(len(vec) - 1, d - 1, -1):
        c = vec[k]
        if c:
            base = k - d
            for i in range(d):
                if phi[i]:
                    vec[base + i] -= c * phi[i]
            vec[k] = 0
    if len(vec) >= d:
        return vec[:d]
    return vec + [0] * (d - len(vec))


class CycNum:
    """Element of the cyclotomic field Q(zeta_order)"""

    __slots__ = ('order', 'num', 'den')

    def __init__(self, order: int, num: Sequence[int], den: int = 1):
        """
        Initialize a field element from power-basis coordinates num/den

        Args:
            order: cyclotomic order n >= 1
            num: integer coefficients of 1, zeta, zeta^2, ... (any length)
            den: nonzero integer denominator
        """
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self._set(order, _reduce([int(c) for c in num], order), int(den))

    def _set(self, order: int, vec: List[int], den: int):
        if den < 0:
            vec = [-c for c in vec]
            den = -den
        g = math.gcd(den, *vec)
        if g > 1:
            vec = [c // g for c in vec]
            den //= g
        self.order = order
        self.num = tuple(vec)
        self.den = den

    @classmethod
    def _raw(cls, order: int, vec: List[int], den: int) -> 'CycNum':
        obj = cls.__new__(cls)
        obj._set(order, vec, den)
        return obj

    # ---- construction helpers -------------------------------------------

    @classmethod
    def coerce(cls, value) -> 'CycNum':
        if isinstance(value, CycNum):
            return value
        if isinstance(value, int):
            return cls._raw(1, [value], 1)
        if isinstance(value, Fraction):
            return cls._raw(1, [value.numerator], value.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycNum")

    @classmethod
    def from_fractions(cls, order: int, coords: Iterable) -> 'CycNum':
        coords = [Fraction(c) for c in coords]
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return cls(order, [int(c * den) for c in coords], den)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> 'CycNum':
        """zeta_n^k"""
        k %= n
        vec = [0] * (k + 1)
        vec[k] = 1
        return cls(n, vec, 1)

    @classmethod
    def random(cls, order: int, rng: random.Random, bound: int = 9) -> 'CycNum':
        return cls(order, [rng.randint(-bound, bound) for _ in range(totient(order))], rng.randint(1, 3))

    # ---- order handling -------------------------------------------------

    def lifted(self, m: int) -> Tuple[int, ...]:
        """Numerator coordinates in Q(zeta_m); m must be a multiple of the order"""
        if m == self.order:
            return self.num
        if m % self.order:
            raise ValueError(f"order {m} is not a multiple of {self.order}")
        if self.order == 1:
            return (self.num[0],) + (0,) * (totient(m) - 1)
        step = m // self.order
        vec = [0] * ((len(self.num) - 1) * step + 1)
        for i, c in enumerate(self.num):
            vec[i * step] = c
        return tuple(_reduce(vec, m))

    def with_order(self, m: int) -> 'CycNum':
        return CycNum._raw(m, list(self.lifted(m)), self.den)

    def _align(self, other: 'CycNum'):
        if self.order == other.order:
            return self.num, other.num, self.order
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lifted(m), other.lifted(m), m

    # ---- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    # ---- ring operations ------------------------------------------------

    def __add__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, m = self._align(other)
        vec = [x * other.den + y * self.den for x, y in zip(a, b)]
        return CycNum._raw(m, vec, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.order, [-c for c in self.num], self.den)

    def __sub__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if other.order == 1 or self.order == 1:
            scalar, vector = (other, self) if other.order == 1 else (self, other)
            s = scalar.num[0]
            return CycNum._raw(vector.order, [c * s for c in vector.num], vector.den * scalar.den)
        a, b, m = self._align(other)
        vec = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        vec[i + j] += x * y
        return CycNum._raw(m, _reduce(vec, m), self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> 'CycNum':
        """Multiplicative inverse via extended Euclid against Phi_n"""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNum._raw(self.order, [self.den] + [0] * (len(self.num) - 1), self.num[0])
        p = sympy.Poly(list(reversed(self.num)), _X, domain='QQ')
        phi = sympy.Poly(list(reversed(cyclotomic_coeffs(self.order))), _X, domain='QQ')
        q = p.invert(phi)
        coords = [Fraction(int(c.p), int(c.q)) for c in reversed(q.all_coeffs())]
        return CycNum.from_fractions(self.order, coords) * self.den

    def __truediv__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = CycNum._raw(self.order, [1] + [0] * (len(self.num) - 1), 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ---- comparison -----------------------------------------------------

    def __eq__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, _ = self._align(other)
        return all(x * other.den == y * self.den for x, y in zip(a, b))

    def __hash__(self):
        weights = _trace_weights(self.order)
        trace = sum((w * c for w, c in zip(weights, self.num)), Fraction(0)) / self.den
        return hash(trace)

    # ---- embeddings and encodings ---------------------------------------

    def complex_embed(self, precision: int = 53) -> mpmath.mpc:
        """Value at zeta_n = exp(2 pi i / n), accurate to about 2^-precision"""
        with mpmath.workprec(precision + 16):
            z = mpmath.expjpi(mpmath.mpf(2) / self.order)
            acc = mpmath.mpc(0)
            power = mpmath.mpc(1)
            for c in self.num:
                if c:
                    acc += c * power
                power *= z
            return acc / self.den

    def to_json(self) -> Dict:
        return {'order': self.order, 'num': list(self.num), 'den': self.den}

    @classmethod
    def from_json(cls, data) -> 'CycNum':
        if isinstance(data, dict):
            return cls(int(data['order']), [int(c) for c in data['num']], int(data.get('den', 1)))
        if isinstance(data, bool):
            raise TypeError("boolean is not a field element")
        if isinstance(data, (int, str)):
            return cls.coerce(Fraction(data))
        raise TypeError(f"cannot decode field element from {data!r}")

    def __repr__(self):
        return f"CycNum({self})"

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self.num[0], self.den))
        parts = []
        for k, c in enumerate(self.num):
            if not c:
                continue
            coeff = Fraction(c, self.den)
            if k == 0:
                parts.append(str(coeff))
            else:
                sym = f"z{self.order}" if k == 1 else f"z{self.order}^{k}"
                if coeff == 1:
                    parts.append(sym)
                elif coeff == -1:
                    parts.append(f"-{sym}")
                else:
                    parts.append(f"{coeff}*{sym}")
        return ' + '.join(parts).replace('+ -', '- ')


Scalar = Union[CycNum, int, Fraction]


def cyc(n: int, coeffs: Sequence) -> CycNum:
    """Build an element of Q(zeta_n) from rational power-basis coordinates"""
    return CycNum.from_fractions(n, coeffs)


def common_order(values: Iterable[CycNum]) -> int:
    order = 1
    for v in values:
        order = order * v.order // math.gcd(order, v.order)
    return order


ZERO = CycNum(1, [0])
ONE = CycNum(1, [1])
