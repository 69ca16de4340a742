"""
cylnogo/classical.py

The complexified Poisson algebra of the cylinder. Elements are finite sums of
monomials e^r_m = l^r exp(i m theta) with Scalar coefficients; products,
the canonical bracket {f,g} = df/dl dg/dtheta - df/dtheta dg/dl, conjugation,
grading and the ladder/elimination machinery all act term by term.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from cylnogo.errors import EliminationError
from cylnogo.scalars import Gaussian, I_UNIT, ONE, Scalar, ZERO, coefficient_prefix, join_terms

logger = logging.getLogger(__name__)

Key = Tuple[int, int]

# 1/(2i) = -i/2
_HALF_OVER_I = Gaussian(0, Fraction(-1, 2))


def _basis_text(r: int, m: int) -> str:
    factors = []
    if r:
        factors.append("l" if r == 1 else f"l^{r}")
    if m:
        factors.append(f"E[{m}]")
    return "*".join(factors)


class ClassicalElement:
    """Finite sum of monomials l^r e^{i m theta} keyed by (r, m)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Key, object]] = None):
        cleaned: Dict[Key, Scalar] = {}
        for (r, m), coefficient in (terms or {}).items():
            if r < 0:
                raise ValueError(f"negative l-degree {r}")
            total = cleaned.get((r, m), ZERO) + Scalar.coerce(coefficient)
            if total:
                cleaned[(r, m)] = total
            else:
                cleaned.pop((r, m), None)
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Key, Scalar]) -> "ClassicalElement":
        element = cls.__new__(cls)
        element._terms = terms
        element._hash = None
        return element

    @classmethod
    def monomial(cls, r: int, m: int, coefficient=1) -> "ClassicalElement":
        return cls({(r, m): coefficient})

    @classmethod
    def constant(cls, value) -> "ClassicalElement":
        return cls({(0, 0): value})

    @classmethod
    def coerce(cls, value) -> "ClassicalElement":
        if isinstance(value, ClassicalElement):
            return value
        return cls.constant(value)

    # arithmetic

    def _combine(self, other: "ClassicalElement", sign: int) -> "ClassicalElement":
        terms = dict(self._terms)
        for key, coefficient in other._terms.items():
            total = terms.get(key, ZERO) + (coefficient if sign > 0 else -coefficient)
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return ClassicalElement._raw(terms)

    def __add__(self, other):
        other = _classical_or_none(other)
        if other is None:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _classical_or_none(other)
        if other is None:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = _classical_or_none(other)
        if other is None:
            return NotImplemented
        return other._combine(self, -1)

    def __neg__(self) -> "ClassicalElement":
        return ClassicalElement._raw({key: -coefficient for key, coefficient in self._terms.items()})

    def scale(self, factor) -> "ClassicalElement":
        factor = Scalar.coerce(factor)
        if not factor:
            return ClassicalElement()
        terms = {}
        for key, coefficient in self._terms.items():
            product = coefficient * factor
            if product:
                terms[key] = product
        return ClassicalElement._raw(terms)

    def __mul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ClassicalElement):
            return NotImplemented
        terms: Dict[Key, Scalar] = {}
        for (r, m), left in self._terms.items():
            for (s, n), right in other._terms.items():
                key = (r + s, m + n)
                total = terms.get(key, ZERO) + left * right
                if total:
                    terms[key] = total
                else:
                    terms.pop(key, None)
        return ClassicalElement._raw(terms)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        return self.scale(ONE / Scalar.coerce(other))

    def __pow__(self, exponent: int) -> "ClassicalElement":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"powers must be nonnegative integers, got {exponent!r}")
        result = ClassicalElement.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _classical_or_none(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # inspection

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> List[Tuple[Key, Scalar]]:
        return sorted(self._terms.items())

    def coefficient(self, r: int, m: int) -> Scalar:
        return self._terms.get((r, m), ZERO)

    def support(self) -> List[Key]:
        return sorted(self._terms)

    def harmonics(self) -> List[int]:
        return sorted({m for _, m in self._terms})

    def leading_key(self) -> Key:
        """Largest (r, m) in the support; ordering is by degree, then harmonic."""
        if not self._terms:
            raise ValueError("the zero element has no leading monomial")
        return max(self._terms)

    def parameters(self):
        found = set()
        for coefficient in self._terms.values():
            found |= coefficient.parameters()
        return frozenset(found)

    def within(self, max_degree: int, max_harmonic: int) -> bool:
        return all(r <= max_degree and abs(m) <= max_harmonic for r, m in self._terms)

    # grading

    @property
    def degree(self) -> Union[int, float]:
        """Largest l-degree present, -inf for the zero element."""
        if not self._terms:
            return -math.inf
        return max(r for r, _ in self._terms)

    def homogeneous_part(self, r: int) -> "ClassicalElement":
        return ClassicalElement._raw({key: value for key, value in self._terms.items() if key[0] == r})

    def harmonic_part(self, m: int) -> "ClassicalElement":
        return ClassicalElement._raw({key: value for key, value in self._terms.items() if key[1] == m})

    # conjugation

    def conjugate(self) -> "ClassicalElement":
        return ClassicalElement._raw(
            {(r, -m): coefficient.conjugate() for (r, m), coefficient in self._terms.items()}
        )

    def is_real(self) -> bool:
        return self.conjugate() == self

    def substitute(self, assignment: Mapping[str, object]) -> "ClassicalElement":
        return ClassicalElement({key: value.substitute(assignment) for key, value in self._terms.items()})

    # text

    def to_text(self) -> str:
        parts = []
        for (r, m), coefficient in self.terms():
            basis = _basis_text(r, m)
            if not basis:
                text = coefficient.to_text()
                parts.append(f"({text})" if len(coefficient.terms()) > 1 else text)
            else:
                parts.append(coefficient_prefix(coefficient) + basis)
        return join_terms(parts)

    def to_trig_text(self) -> str:
        """Print as sums of l^r (A cos m theta + B sin m theta) with m >= 0."""
        parts = []
        seen = set()
        for (r, m), _ in self.terms():
            key = (r, abs(m))
            if key in seen:
                continue
            seen.add(key)
            plus, minus = self.coefficient(r, abs(m)), self.coefficient(r, -abs(m))
            power = "" if r == 0 else ("l" if r == 1 else f"l^{r}")
            if m == 0:
                parts.append(_trig_term(plus, power, ""))
                continue
            cosine = plus + minus
            sine = (plus - minus) * I_UNIT
            if cosine:
                parts.append(_trig_term(cosine, power, f"cos[{abs(m)}]"))
            if sine:
                parts.append(_trig_term(sine, power, f"sin[{abs(m)}]"))
        return join_terms(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"ClassicalElement({self.to_text()!r})"


def _trig_term(coefficient: Scalar, power: str, trig: str) -> str:
    basis = "*".join(part for part in (power, trig) if part)
    if not basis:
        text = coefficient.to_text()
        return f"({text})" if len(coefficient.terms()) > 1 else text
    return coefficient_prefix(coefficient) + basis


def _classical_or_none(value) -> Optional[ClassicalElement]:
    if isinstance(value, ClassicalElement):
        return value
    if isinstance(value, (Scalar, Gaussian, int, Fraction)):
        return ClassicalElement.constant(value)
    return None


# named elements

def ell(power: int = 1) -> ClassicalElement:
    return ClassicalElement.monomial(power, 0)


def exp_i(m: int) -> ClassicalElement:
    return ClassicalElement.monomial(0, m)


def sin(k: int = 1) -> ClassicalElement:
    """sin(k theta) = (e^{ik theta} - e^{-ik theta}) / 2i."""
    if k == 0:
        return ClassicalElement()
    return ClassicalElement({(0, k): _HALF_OVER_I, (0, -k): -_HALF_OVER_I})


def cos(k: int = 1) -> ClassicalElement:
    if k == 0:
        return ClassicalElement.constant(1)
    return ClassicalElement({(0, k): Fraction(1, 2), (0, -k): Fraction(1, 2)})


def basic_set() -> List[ClassicalElement]:
    """Monomial basis {1, e^0_1, e^0_-1, l} of the complexified basic set."""
    return [ClassicalElement.constant(1), exp_i(1), exp_i(-1), ell()]


# bracket and ladders

def poisson_bracket(f: ClassicalElement, g: ClassicalElement) -> ClassicalElement:
    """{e^r_m, e^s_n} = i(rn - ms) e^{r+s-1}_{m+n}, extended bilinearly."""
    terms: Dict[Key, Scalar] = {}
    for (r, m), left in f._terms.items():
        for (s, n), right in g._terms.items():
            weight = r * n - m * s
            if not weight:
                continue
            key = (r + s - 1, m + n)
            total = terms.get(key, ZERO) + left * right * Gaussian(0, weight)
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
    return ClassicalElement._raw(terms)


def ladder(k: int, p: ClassicalElement) -> ClassicalElement:
    """L_k(e^r_m) = i(m - kr) e^r_{m+k}; equals {l e^{ik theta}, p}."""
    terms: Dict[Key, Scalar] = {}
    for (r, m), coefficient in p._terms.items():
        weight = m - k * r
        if weight:
            terms[(r, m + k)] = coefficient * Gaussian(0, weight)
    return ClassicalElement._raw(terms)


def eliminate_to_monomial(p: ClassicalElement, target_m: int) -> ClassicalElement:
    """Strip every harmonic but target_m from p using p <- L_0(p) - iMp.

    Each step multiplies harmonic m by i(m - M), removing exactly harmonic M,
    so the loop runs once per other harmonic present.
    """
    if p.harmonic_part(target_m).is_zero():
        raise EliminationError(f"harmonic {target_m} is absent from {p.to_text()}")
    others = [m for m in p.harmonics() if m != target_m]
    for harmonic in others:
        p = ladder(0, p) - p.scale(Gaussian(0, harmonic))
        logger.debug(f"eliminated harmonic {harmonic}: {p.to_text()}")
    return p


def grade(f: ClassicalElement, kind: str, index: Optional[int] = None):
    """Dispatch for 'degree', 'homogeneous' (index = r) and 'harmonic' (index = m)."""
    if kind == "degree":
        return f.degree
    if kind == "homogeneous":
        return f.homogeneous_part(index)
    if kind == "harmonic":
        return f.harmonic_part(index)
    raise ValueError(f"unknown grading '{kind}'")
