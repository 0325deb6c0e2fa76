import logging
import re
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from src.utils.errors import DimensionMismatchError, NonExactDivisionError, ParameterError

logger = logging.getLogger(__name__)

# A monomial is a tuple of (variable, exponent) pairs sorted by variable.
# Variables are 1-based and exponents are positive; () is the constant monomial.
Monomial = Tuple[Tuple[int, int], ...]
Scalar = Union[int, Fraction]

ONE: Monomial = ()

_RATIONAL_PATTERN = re.compile(r'^([+-]?\d+)(?:/(\d+))?$')


def parse_rational(text: str) -> Fraction:
    """Parse 'a', '-a', '+a' or 'a/b' into an exact rational"""
    match = _RATIONAL_PATTERN.match(text.strip())
    if not match:
        raise ParameterError(f"Not a rational number: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParameterError(f"Zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Scalar) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def monomial_degree(m: Monomial) -> int:
    return sum(exp for _, exp in m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for var, exp in b:
        exps[var] = exps.get(var, 0) + exp
    return tuple(sorted(exps.items()))


def monomial_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """a / b, or None when b does not divide a"""
    exps = dict(a)
    for var, exp in b:
        rest = exps.get(var, 0) - exp
        if rest < 0:
            return None
        if rest == 0:
            del exps[var]
        else:
            exps[var] = rest
    return tuple(sorted(exps.items()))


def monomial_key(m: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Graded lexicographic sort key with x1 > x2 > ..."""
    if not m:
        return (0, ())
    exps = dict(m)
    dense = tuple(exps.get(var, 0) for var in range(1, m[-1][0] + 1))
    return (monomial_degree(m), dense)


def format_monomial(m: Monomial, var: str = "x") -> str:
    return "*".join(f"{var}{v}" if e == 1 else f"{var}{v}^{e}" for v, e in m)


class Polynomial:
    """Immutable sparse polynomial over the rationals, keyed by canonical monomials"""

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        cleaned: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    cleaned[mono] = Fraction(coeff)
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Fraction]) -> 'Polynomial':
        # caller guarantees no zero coefficients
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> 'Polynomial':
        return cls._wrap({})

    @classmethod
    def constant(cls, value: Scalar) -> 'Polynomial':
        return cls({ONE: value})

    @classmethod
    def variable(cls, index: int) -> 'Polynomial':
        if index < 1:
            raise ParameterError(f"Variable indices start at 1, got {index}")
        return cls._wrap({((index, 1),): Fraction(1)})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Monomial, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        if not self._terms:
            return -1
        return max(monomial_degree(m) for m in self._terms)

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({v for m in self._terms for v, _ in m}))

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("The zero polynomial has no leading term")
        mono = max(self._terms, key=monomial_key)
        return mono, self._terms[mono]

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda item: monomial_key(item[0]), reverse=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({ONE: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> 'Polynomial':
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> 'Polynomial':
        other = _coerce(other)
        if other is None:
            return NotImplemented
        result = dict(self._terms)
        for mono, coeff in other._terms.items():
            total = result.get(mono, 0) + coeff
            if total:
                result[mono] = total
            else:
                result.pop(mono, None)
        return Polynomial._wrap(result)

    __radd__ = __add__

    def __sub__(self, other) -> 'Polynomial':
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Polynomial':
        return (-self) + other

    def __mul__(self, other) -> 'Polynomial':
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return Polynomial.zero()
        result: Dict[Monomial, Fraction] = {}
        for m0, c0 in self._terms.items():
            for m1, c1 in other._terms.items():
                mono = monomial_mul(m0, m1)
                result[mono] = result.get(mono, 0) + c0 * c1
        return Polynomial._wrap({m: c for m, c in result.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'Polynomial':
        if exponent < 0:
            raise ParameterError("Negative powers are not polynomials")
        acc = Polynomial.constant(1)
        for bit in bin(exponent)[2:]:
            acc = acc * acc
            if bit == '1':
                acc = acc * self
        return acc

    def scale(self, factor: Scalar) -> 'Polynomial':
        if not factor:
            return Polynomial.zero()
        factor = Fraction(factor)
        return Polynomial._wrap({m: c * factor for m, c in self._terms.items()})

    def content(self) -> Fraction:
        """Gcd of the numerators over the lcm of the denominators, signed like the leading term"""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for coeff in self._terms.values():
            num = gcd(num, coeff.numerator)
            den = lcm(den, coeff.denominator)
        sign = -1 if self.leading_term()[1] < 0 else 1
        return Fraction(sign * num, den)

    def primitive(self) -> 'Polynomial':
        if not self._terms:
            return self
        return self.scale(1 / self.content())

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Substitute point[k-1] for x_k"""
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for var, exp in mono:
                if var > len(point):
                    raise DimensionMismatchError(
                        f"Point of length {len(point)} has no value for x{var}")
                value *= Fraction(point[var - 1]) ** exp
            total += value
        return total

    def exact_div(self, divisor: 'Polynomial') -> 'Polynomial':
        """Quotient q with q * divisor == self; raises when a remainder appears"""
        if not divisor._terms:
            raise ZeroDivisionError("Polynomial division by zero")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        lead_mono, lead_coeff = divisor.leading_term()
        remainder = dict(self._terms)
        quotient: Dict[Monomial, Fraction] = {}
        while remainder:
            mono = max(remainder, key=monomial_key)
            factor = monomial_div(mono, lead_mono)
            if factor is None:
                raise NonExactDivisionError(f"({self}) is not divisible by ({divisor})")
            coeff = remainder[mono] / lead_coeff
            quotient[factor] = coeff
            for dm, dc in divisor._terms.items():
                target = monomial_mul(factor, dm)
                value = remainder.get(target, 0) - coeff * dc
                if value:
                    remainder[target] = value
                else:
                    remainder.pop(target, None)
        return Polynomial._wrap(quotient)

    def to_string(self, var: str = "x") -> str:
        if not self._terms:
            return "0"
        parts = []
        for index, (mono, coeff) in enumerate(self.sorted_terms()):
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if not mono:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = format_monomial(mono, var)
            else:
                body = f"{format_rational(magnitude)}*{format_monomial(mono, var)}"
            if index == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r})"


def _coerce(value) -> Optional[Polynomial]:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    return None


class LinearForm:
    """Homogeneous degree-one polynomial sum_s c_s x_s, stored as {s: c_s}"""

    __slots__ = ('_coefficients',)

    def __init__(self, coefficients: Optional[Mapping[int, Scalar]] = None):
        self._coefficients: Dict[int, Fraction] = {
            var: Fraction(c) for var, c in sorted((coefficients or {}).items()) if c
        }

    @property
    def coefficients(self) -> Dict[int, Fraction]:
        return dict(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def __bool__(self) -> bool:
        return bool(self._coefficients)

    def __eq__(self, other) -> bool:
        if isinstance(other, LinearForm):
            return self._coefficients == other._coefficients
        if isinstance(other, Polynomial):
            return self.to_polynomial() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coefficients.items()))

    def __neg__(self) -> 'LinearForm':
        return LinearForm({v: -c for v, c in self._coefficients.items()})

    def __add__(self, other: 'LinearForm') -> 'LinearForm':
        merged = dict(self._coefficients)
        for var, coeff in other._coefficients.items():
            merged[var] = merged.get(var, 0) + coeff
        return LinearForm(merged)

    def to_polynomial(self) -> Polynomial:
        return Polynomial({((var, 1),): c for var, c in self._coefficients.items()})

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        total = Fraction(0)
        for var, coeff in self._coefficients.items():
            if var > len(point):
                raise DimensionMismatchError(f"Point of length {len(point)} has no value for x{var}")
            total += coeff * Fraction(point[var - 1])
        return total

    def __str__(self) -> str:
        return str(self.to_polynomial())

    def __repr__(self) -> str:
        return f"LinearForm({str(self)!r})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_eval(p: Polynomial, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    try:
        return a.exact_div(b)
    except NonExactDivisionError:
        logger.error(f"Non-exact division: ({a}) / ({b})")
        raise
