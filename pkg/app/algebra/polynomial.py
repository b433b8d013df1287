"""
Sparse Multivariate Polynomials
app/algebra/polynomial.py

Polynomials over cyclotomic fields stored as {exponent tuple: CycNum}.
HomogPoly adds the homogeneity check used for map components.
"""
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.algebra.cycnum import CycNum, ONE, ZERO

Monomial = Tuple[int, ...]


def _result_class(a, b):
    return type(a) if type(a) is type(b) else SparsePoly


VAR_NAMES = ('x0', 'x1', 'x2', 'x3')


class SparsePoly:
    """Sparse polynomial in nvars variables with CycNum coefficients"""

    __slots__ = ('nvars', 'terms')

    def __init__(self, nvars: int, terms: Optional[Dict[Monomial, CycNum]] = None):
        self.nvars = nvars
        clean = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            coeff = CycNum.coerce(coeff)
            if coeff:
                clean[tuple(mono)] = coeff
        self.terms = clean
        self._check()

    def _check(self):
        pass

    def _new(self, terms: Dict[Monomial, CycNum], cls=None) -> 'SparsePoly':
        cls = cls or type(self)
        obj = cls.__new__(cls)
        obj.nvars = self.nvars
        obj.terms = {m: c for m, c in terms.items() if c}
        obj._check()
        return obj

    # ---- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> 'SparsePoly':
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> 'SparsePoly':
        return cls(nvars, {(0,) * nvars: CycNum.coerce(value)})

    @classmethod
    def variable(cls, index: int, nvars: int) -> 'SparsePoly':
        mono = [0] * nvars
        mono[index] = 1
        return cls(nvars, {tuple(mono): ONE})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> 'SparsePoly':
        """sum coeffs[i] * x_i"""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = CycNum.coerce(c)
        return cls(n, terms)

    # ---- predicates and degrees -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(m[index] for m in self.terms)

    def min_degree_in(self, index: int) -> int:
        return min(m[index] for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def variables(self) -> List[int]:
        return [i for i in range(self.nvars) if any(m[i] for m in self.terms)]

    def leading(self) -> Tuple[Monomial, CycNum]:
        """Lex-leading monomial and coefficient"""
        mono = max(self.terms)
        return mono, self.terms[mono]

    def constant_value(self) -> CycNum:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient_order(self) -> int:
        from app.algebra.cycnum import common_order
        return common_order(self.terms.values())

    # ---- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = type(self).constant(self.nvars, other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                terms[m] = terms[m] + c
            else:
                terms[m] = c
        return self._new(terms, _result_class(self, other))

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            other = type(self).constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> 'SparsePoly':
        factor = CycNum.coerce(factor)
        if not factor:
            return self._new({})
        return self._new({m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        terms: Dict[Monomial, CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                if m in terms:
                    terms[m] = terms[m] + prod
                else:
                    terms[m] = prod
        return self._new(terms, _result_class(self, other))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = type(self).constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                other = SparsePoly.constant(self.nvars, other)
            except TypeError:
                return NotImplemented
        if self.nvars != other.nvars or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    def __hash__(self):
        return hash(frozenset(self.terms.keys()))

    def monic(self) -> 'SparsePoly':
        """Scale so the lex-leading coefficient is 1"""
        if not self.terms:
            return self
        _, lead = self.leading()
        return self.scale(lead.inv())

    # ---- calculus, evaluation, substitution ----------------------------

    def partial(self, index: int) -> 'SparsePoly':
        terms = {}
        for m, c in self.terms.items():
            if m[index]:
                mm = list(m)
                mm[index] -= 1
                terms[tuple(mm)] = c * m[index]
        return self._new(terms)

    def evaluate(self, point: Sequence) -> CycNum:
        point = [CycNum.coerce(v) for v in point]
        total = ZERO
        for m, c in self.terms.items():
            val = c
            for v, e in zip(point, m):
                if e:
                    val = val * (v ** e)
            total = total + val
        return total

    def substitute(self, values: Sequence['SparsePoly']) -> 'SparsePoly':
        """Compose with a tuple of polynomials, one per variable"""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitutions, got {len(values)}")
        target = values[0].nvars if values else 0
        powers: List[Dict[int, SparsePoly]] = [{0: SparsePoly.constant(target, 1)} for _ in values]

        def power(i: int, e: int) -> SparsePoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * values[i]
            return cache[e]

        result = SparsePoly.zero(target)
        for m, c in self.terms.items():
            term = SparsePoly.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        if isinstance(self, HomogPoly) and all(isinstance(v, HomogPoly) for v in values):
            return HomogPoly.from_sparse(result)
        return result

    # ---- division -------------------------------------------------------

    def divide_exact(self, divisor: 'SparsePoly') -> Optional['SparsePoly']:
        """Quotient if divisor divides self exactly, else None (lex division)"""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_m, lead_c = divisor.leading()
        lead_inv = lead_c.inv()
        remainder = dict(self.terms)
        quotient: Dict[Monomial, CycNum] = {}
        while remainder:
            m = max(remainder)
            if any(a < b for a, b in zip(m, lead_m)):
                return None
            q_m = tuple(a - b for a, b in zip(m, lead_m))
            q_c = remainder[m] * lead_inv
            quotient[q_m] = q_c
            for dm, dc in divisor.terms.items():
                t = tuple(a + b for a, b in zip(dm, q_m))
                v = remainder.get(t, ZERO) - dc * q_c
                if v:
                    remainder[t] = v
                else:
                    remainder.pop(t, None)
        return self._new(quotient)

    def divides(self, other: 'SparsePoly') -> bool:
        return other.divide_exact(self) is not None

    # ---- conversion -----------------------------------------------------

    def coefficients_in(self, index: int) -> Dict[int, 'SparsePoly']:
        """Coefficients as polynomials in the remaining variables, keyed by the power of x_index"""
        out: Dict[int, Dict[Monomial, CycNum]] = {}
        for m, c in self.terms.items():
            e = m[index]
            mm = list(m)
            mm[index] = 0
            out.setdefault(e, {})[tuple(mm)] = c
        return {e: SparsePoly(self.nvars, t) for e, t in out.items()}

    def as_sparse(self) -> 'SparsePoly':
        return SparsePoly(self.nvars, self.terms)

    def to_json(self) -> List:
        return [[list(m), c.to_json()] for m, c in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable) -> 'SparsePoly':
        return cls(nvars, {tuple(m): CycNum.from_json(c) for m, c in data})

    def to_str(self, names: Sequence[str] = VAR_NAMES) -> str:
        if not self.terms:
            return '0'
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = '*'.join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            coeff = str(c)
            if not mono:
                parts.append(f"({coeff})" if ' ' in coeff else coeff)
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({coeff})*{mono}")
        return ' + '.join(parts)

    def __repr__(self):
        names = VAR_NAMES if self.nvars <= 4 else [f"x{i}" for i in range(self.nvars)]
        return f"{type(self).__name__}({self.to_str(names)})"


class HomogPoly(SparsePoly):
    """Homogeneous polynomial in 3 or 4 projective coordinates"""

    __slots__ = ()

    def _check(self):
        if not self.is_homogeneous():
            raise ValueError(f"inhomogeneous polynomial rejected: {self.to_str()}")

    @classmethod
    def from_sparse(cls, poly: SparsePoly) -> 'HomogPoly':
        return cls(poly.nvars, poly.terms)

    def degree(self) -> int:
        return self.total_degree()

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = HomogPoly.constant(self.nvars, other)
        if other.terms and self.terms and other.total_degree() != self.total_degree():
            raise ValueError("sum of homogeneous polynomials of different degrees")
        return super().__add__(other)


def coordinate_vars(nvars: int = 4) -> List[HomogPoly]:
    return [HomogPoly.variable(i, nvars) for i in range(nvars)]
