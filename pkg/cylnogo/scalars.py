"""
cylnogo/scalars.py

Exact coefficient ring of the engine: Gaussian rationals extended by commuting
formal parameters. Every parameter is real, so conjugation only flips the sign
of the imaginary part of each coefficient.

Parameter alphabet: alpha, nu, eta, b, c, bp, cp, mu, lambda and xi[n] with
|n| <= 64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from cylnogo.errors import NonlinearConstraintError, ParameterError

BASE_PARAMETERS = frozenset({"alpha", "nu", "eta", "b", "c", "bp", "cp", "mu", "lambda"})
XI_BOUND = 64
_XI_NAME = re.compile(r"^xi\[(-?\d+)\]$")

Monomial = Tuple[Tuple[str, int], ...]


def xi_name(n: int) -> str:
    if abs(n) > XI_BOUND:
        raise ParameterError(f"xi index {n} exceeds the bound {XI_BOUND}")
    return f"xi[{n}]"


def validate_parameter(name: str) -> str:
    """Return the canonical spelling of a parameter name or raise ParameterError."""
    if name in BASE_PARAMETERS:
        return name
    match = _XI_NAME.match(name)
    if match:
        return xi_name(int(match.group(1)))
    raise ParameterError(f"unknown parameter '{name}'")


def parameter_sort_key(name: str) -> Tuple[str, int]:
    match = _XI_NAME.match(name)
    if match:
        return ("xi", int(match.group(1)))
    return (name, 0)


def monomial_sort_key(monomial: Monomial):
    return tuple((parameter_sort_key(name), power) for name, power in monomial)


def join_terms(parts: List[str]) -> str:
    """Join signed term texts into 'a + b - c'."""
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            text += " - " + part[1:]
        else:
            text += " + " + part
    return text


@dataclass(frozen=True, eq=False)
class Gaussian:
    """Exact complex rational re + im*i."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "Gaussian":
        if isinstance(value, Gaussian):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot use {value!r} as an exact coefficient")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            other = Gaussian.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        other = _gaussian_or_none(other)
        if other is None:
            return NotImplemented
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _gaussian_or_none(other)
        if other is None:
            return NotImplemented
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _gaussian_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _gaussian_or_none(other)
        if other is None:
            return NotImplemented
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "Gaussian":
        return Gaussian(-self.re, -self.im)

    def __truediv__(self, other):
        other = _gaussian_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def inverse(self) -> "Gaussian":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of the zero coefficient")
        return Gaussian(self.re / norm, -self.im / norm)

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def is_real(self) -> bool:
        return not self.im

    def to_text(self) -> str:
        if not self.im:
            return str(self.re)
        magnitude = abs(self.im)
        imaginary = "i" if magnitude == 1 else f"{magnitude}*i"
        if not self.re:
            return "-" + imaginary if self.im < 0 else imaginary
        sign = "-" if self.im < 0 else "+"
        return f"({self.re}{sign}{imaginary})"

    def __str__(self) -> str:
        return self.to_text()


def _gaussian_or_none(value) -> Optional[Gaussian]:
    try:
        return Gaussian.coerce(value)
    except TypeError:
        return None


_G_ZERO = Gaussian()
_G_ONE = Gaussian(1)


def _multiply_monomials(left: Monomial, right: Monomial) -> Monomial:
    if not left:
        return right
    if not right:
        return left
    exponents = dict(left)
    for name, power in right:
        exponents[name] = exponents.get(name, 0) + power
    return tuple(sorted(exponents.items(), key=lambda item: parameter_sort_key(item[0])))


def _canonical_monomial(monomial: Iterable[Tuple[str, int]]) -> Monomial:
    exponents: Dict[str, int] = {}
    for name, power in monomial:
        if power < 0:
            raise ParameterError(f"negative exponent {power} on '{name}'")
        if power:
            name = validate_parameter(name)
            exponents[name] = exponents.get(name, 0) + power
    return tuple(sorted(exponents.items(), key=lambda item: parameter_sort_key(item[0])))


class Scalar:
    """Sparse polynomial in the formal parameters with Gaussian-rational coefficients.

    Instances are immutable. The stored mapping never holds a zero coefficient,
    so equality of Scalars is equality of their term dictionaries.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Iterable[Tuple[str, int]], object]] = None):
        cleaned: Dict[Monomial, Gaussian] = {}
        for monomial, coefficient in (terms or {}).items():
            key = _canonical_monomial(monomial)
            total = cleaned.get(key, _G_ZERO) + Gaussian.coerce(coefficient)
            if total:
                cleaned[key] = total
            else:
                cleaned.pop(key, None)
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Gaussian]) -> "Scalar":
        scalar = cls.__new__(cls)
        scalar._terms = terms
        scalar._hash = None
        return scalar

    @classmethod
    def constant(cls, value) -> "Scalar":
        value = Gaussian.coerce(value)
        return cls._raw({(): value} if value else {})

    @classmethod
    def parameter(cls, name: str) -> "Scalar":
        return cls._raw({((validate_parameter(name), 1),): _G_ONE})

    @classmethod
    def xi(cls, n: int) -> "Scalar":
        return cls._raw({((xi_name(n), 1),): _G_ONE})

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls.constant(value)

    # ring operations

    def __add__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        terms = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            total = terms.get(monomial, _G_ZERO) + coefficient
            if total:
                terms[monomial] = total
            else:
                del terms[monomial]
        return Scalar._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({monomial: -coefficient for monomial, coefficient in self._terms.items()})

    def __pos__(self) -> "Scalar":
        return self

    def __sub__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        terms: Dict[Monomial, Gaussian] = {}
        for left_monomial, left_coefficient in self._terms.items():
            for right_monomial, right_coefficient in other._terms.items():
                monomial = _multiply_monomials(left_monomial, right_monomial)
                total = terms.get(monomial, _G_ZERO) + left_coefficient * right_coefficient
                if total:
                    terms[monomial] = total
                else:
                    terms.pop(monomial, None)
        return Scalar._raw(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"scalar powers must be nonnegative integers, got {exponent!r}")
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __truediv__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        if not other.is_constant():
            raise ValueError(f"division by the non-constant scalar {other.to_text()}")
        inverse = other.constant_value().inverse()
        return Scalar._raw({monomial: coefficient * inverse for monomial, coefficient in self._terms.items()})

    def __rtruediv__(self, other):
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return other / self

    # comparison and hashing

    def __eq__(self, other) -> bool:
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Gaussian:
        if not self.is_constant():
            raise ValueError(f"{self.to_text()} is not a constant")
        return self._terms.get((), _G_ZERO)

    def parameters(self) -> FrozenSet[str]:
        return frozenset(name for monomial in self._terms for name, _ in monomial)

    def terms(self) -> List[Tuple[Monomial, Gaussian]]:
        return sorted(self._terms.items(), key=lambda item: monomial_sort_key(item[0]))

    def coefficient(self, monomial: Monomial = ()) -> Gaussian:
        return self._terms.get(_canonical_monomial(monomial), _G_ZERO)

    # conjugation and substitution

    def conjugate(self) -> "Scalar":
        return Scalar._raw({monomial: coefficient.conjugate() for monomial, coefficient in self._terms.items()})

    def real_part(self) -> "Scalar":
        return (self + self.conjugate()) / 2

    def imag_part(self) -> "Scalar":
        return (self - self.conjugate()) * Gaussian(0, Fraction(-1, 2))

    def substitute(self, assignment: Mapping[str, object]) -> "Scalar":
        if not assignment:
            return self
        values = {validate_parameter(name): Scalar.coerce(value) for name, value in assignment.items()}
        result = ZERO
        for monomial, coefficient in self._terms.items():
            factor = Scalar._raw({(): coefficient})
            kept = []
            for name, power in monomial:
                if name in values:
                    factor = factor * values[name] ** power
                else:
                    kept.append((name, power))
            result = result + factor * Scalar._raw({tuple(kept): _G_ONE})
        return result

    def linear_split(self, unknowns: Iterable[str]) -> Tuple[Dict[str, "Scalar"], "Scalar"]:
        """Write self as sum(coefficient[u] * u) + rest with no unknown left in rest."""
        unknowns = frozenset(unknowns)
        coefficients: Dict[str, Scalar] = {}
        rest: Dict[Monomial, Gaussian] = {}
        for monomial, coefficient in self._terms.items():
            hits = [(name, power) for name, power in monomial if name in unknowns]
            degree = sum(power for _, power in hits)
            if degree == 0:
                rest[monomial] = coefficient
            elif degree == 1:
                name = hits[0][0]
                reduced = tuple(item for item in monomial if item[0] != name)
                coefficients[name] = coefficients.get(name, ZERO) + Scalar._raw({reduced: coefficient})
            else:
                raise NonlinearConstraintError(
                    f"{self.to_text()} has degree {degree} in the unknowns {sorted(unknowns)}"
                )
        return {name: value for name, value in coefficients.items() if value}, Scalar._raw(rest)

    # text

    def to_text(self) -> str:
        parts = []
        for monomial, coefficient in self.terms():
            if not monomial:
                parts.append(coefficient.to_text())
                continue
            body = "*".join(name if power == 1 else f"{name}^{power}" for name, power in monomial)
            if coefficient == 1:
                parts.append(body)
            elif coefficient == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{coefficient.to_text()}*{body}")
        return join_terms(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


def _scalar_or_none(value) -> Optional[Scalar]:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction, Gaussian)):
        return Scalar.constant(value)
    return None


def coefficient_prefix(scalar: Scalar) -> str:
    """Text placed before a basis word: '' for 1, '-' for -1, else 'c*' or '(c)*'."""
    if scalar == 1:
        return ""
    if scalar == -1:
        return "-"
    text = scalar.to_text()
    if len(scalar._terms) > 1:
        return f"({text})*"
    return f"{text}*"


ZERO = Scalar()
ONE = Scalar.constant(1)
I_UNIT = Scalar.constant(Gaussian(0, 1))

ScalarLike = Union[Scalar, Gaussian, int, Fraction]
