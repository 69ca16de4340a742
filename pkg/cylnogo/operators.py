"""
cylnogo/operators.py

Operators on circle Fourier modes |n> = e^{in theta}/sqrt(2 pi), generated by
    E   multiplication by e^{i theta}      E|n> = |n+1>
    D   -i d/dtheta                        D|n> = n|n>
    Xi  an abstract diagonal operator      Xi|n> = xi[n]|n>
and the identity. Elements are kept in normal order E^m Xi^p D^k, using
D^k E^m = E^m (D + m)^k. Xi commutes with D; moving Xi past a nonzero power of
E is never done symbolically. Such products become FormalProduct values whose
factors are applied to kets one at a time.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple, Union

from cylnogo.errors import DeferredOrderingError, KetIndexError, ParameterError
from cylnogo.scalars import Gaussian, ONE, Scalar, ZERO, coefficient_prefix, join_terms

logger = logging.getLogger(__name__)

Word = Tuple[int, int, int]
IDENTITY_WORD: Word = (0, 0, 0)


def word_text(word: Word) -> str:
    m, p, k = word
    factors = []
    if m:
        factors.append(f"E[{m}]")
    if p:
        factors.append("Xi" if p == 1 else f"Xi^{p}")
    if k:
        factors.append("D" if k == 1 else f"D^{k}")
    return "*".join(factors) or "I"


class KetCombination:
    """Finite Scalar-weighted combination of basis kets |n>."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, object]] = None):
        cleaned: Dict[int, Scalar] = {}
        for n, coefficient in (terms or {}).items():
            total = cleaned.get(n, ZERO) + Scalar.coerce(coefficient)
            if total:
                cleaned[n] = total
            else:
                cleaned.pop(n, None)
        self._terms = cleaned

    @classmethod
    def basis(cls, n: int) -> "KetCombination":
        return cls({n: ONE})

    def __add__(self, other: "KetCombination") -> "KetCombination":
        terms = dict(self._terms)
        for n, coefficient in other._terms.items():
            total = terms.get(n, ZERO) + coefficient
            if total:
                terms[n] = total
            else:
                terms.pop(n, None)
        result = KetCombination()
        result._terms = terms
        return result

    def __sub__(self, other: "KetCombination") -> "KetCombination":
        return self + other.scale(-1)

    def scale(self, factor) -> "KetCombination":
        return KetCombination({n: coefficient * Scalar.coerce(factor) for n, coefficient in self._terms.items()})

    def coefficient(self, n: int) -> Scalar:
        return self._terms.get(n, ZERO)

    def terms(self) -> List[Tuple[int, Scalar]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, KetCombination):
            return NotImplemented
        return self._terms == other._terms

    def to_text(self) -> str:
        return join_terms([f"{coefficient_prefix(coefficient)}|{n}>" for n, coefficient in self.terms()])

    def __repr__(self) -> str:
        return f"KetCombination({self.to_text()!r})"


def _xi_value(n: int, power: int) -> Scalar:
    try:
        return Scalar.xi(n) ** power
    except ParameterError as error:
        raise KetIndexError(str(error)) from error


class OperatorElement:
    """Normal-ordered sum of words E^m Xi^p D^k with Scalar coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Word, object]] = None):
        cleaned: Dict[Word, Scalar] = {}
        for (m, p, k), coefficient in (terms or {}).items():
            if p < 0 or k < 0:
                raise ValueError(f"word powers must be nonnegative, got {(m, p, k)}")
            total = cleaned.get((m, p, k), ZERO) + Scalar.coerce(coefficient)
            if total:
                cleaned[(m, p, k)] = total
            else:
                cleaned.pop((m, p, k), None)
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Word, Scalar]) -> "OperatorElement":
        element = cls.__new__(cls)
        element._terms = terms
        element._hash = None
        return element

    @classmethod
    def scalar(cls, value) -> "OperatorElement":
        return cls({IDENTITY_WORD: value})

    @classmethod
    def identity(cls) -> "OperatorElement":
        return cls.scalar(1)

    @classmethod
    def shift(cls, m: int = 1) -> "OperatorElement":
        return cls({(m, 0, 0): 1})

    @classmethod
    def derivative(cls) -> "OperatorElement":
        return cls({(0, 0, 1): 1})

    @classmethod
    def diagonal(cls) -> "OperatorElement":
        return cls({(0, 1, 0): 1})

    @classmethod
    def coerce(cls, value) -> "OperatorElement":
        if isinstance(value, OperatorElement):
            return value
        return cls.scalar(value)

    # linear structure

    def _combine(self, other: "OperatorElement", sign: int) -> "OperatorElement":
        terms = dict(self._terms)
        for word, coefficient in other._terms.items():
            total = terms.get(word, ZERO) + (coefficient if sign > 0 else -coefficient)
            if total:
                terms[word] = total
            else:
                terms.pop(word, None)
        return OperatorElement._raw(terms)

    def __add__(self, other):
        other = _operator_or_none(other)
        if other is None:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _operator_or_none(other)
        if other is None:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = _operator_or_none(other)
        if other is None:
            return NotImplemented
        return other._combine(self, -1)

    def __neg__(self) -> "OperatorElement":
        return OperatorElement._raw({word: -coefficient for word, coefficient in self._terms.items()})

    def scale(self, factor) -> "OperatorElement":
        factor = Scalar.coerce(factor)
        terms = {}
        for word, coefficient in self._terms.items():
            product = coefficient * factor
            if product:
                terms[word] = product
        return OperatorElement._raw(terms)

    # product

    def __mul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, OperatorElement):
            return NotImplemented
        terms: Dict[Word, Scalar] = {}
        for (m1, p1, k1), left in self._terms.items():
            for (m2, p2, k2), right in other._terms.items():
                if p1 and m2:
                    raise DeferredOrderingError(
                        f"moving Xi^{p1} past E[{m2}] is only resolved on kets"
                    )
                weight = left * right
                # D^k1 E^m2 = E^m2 (D + m2)^k1
                for t in range(k1 + 1):
                    binomial = comb(k1, t) * m2 ** (k1 - t)
                    if not binomial:
                        continue
                    word = (m1 + m2, p1 + p2, t + k2)
                    total = terms.get(word, ZERO) + weight * binomial
                    if total:
                        terms[word] = total
                    else:
                        terms.pop(word, None)
        return OperatorElement._raw(terms)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "OperatorElement":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"powers must be nonnegative integers, got {exponent!r}")
        result = OperatorElement.identity()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _operator_or_none(other)
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

    def terms(self) -> List[Tuple[Word, Scalar]]:
        return sorted(self._terms.items())

    def words(self) -> List[Word]:
        return sorted(self._terms)

    def coefficient(self, word: Word) -> Scalar:
        return self._terms.get(word, ZERO)

    def has_diagonal(self) -> bool:
        return any(p for _, p, _ in self._terms)

    def substitute(self, assignment: Mapping[str, object]) -> "OperatorElement":
        return OperatorElement({word: value.substitute(assignment) for word, value in self._terms.items()})

    # adjoint and kets

    def adjoint(self) -> "OperatorElement":
        """(c E^m Xi^p D^k)^dagger = conj(c) D^k Xi^p E^{-m}, renormal-ordered."""
        result = OperatorElement()
        for (m, p, k), coefficient in self._terms.items():
            if p and m:
                raise DeferredOrderingError(f"adjoint of {word_text((m, p, k))} needs the Xi exchange")
            word = OperatorElement.derivative() ** k * OperatorElement.shift(-m)
            if p:
                word = OperatorElement.diagonal() ** p * word
            result = result + word.scale(coefficient.conjugate())
        return result

    def apply(self, ket: KetCombination) -> KetCombination:
        terms: Dict[int, Scalar] = {}
        for n, amplitude in ket.terms():
            for (m, p, k), coefficient in self._terms.items():
                value = coefficient * amplitude * n ** k
                if not value:
                    continue
                if p:
                    value = value * _xi_value(n, p)
                target = n + m
                total = terms.get(target, ZERO) + value
                if total:
                    terms[target] = total
                else:
                    terms.pop(target, None)
        return KetCombination(terms)

    # text

    def to_text(self) -> str:
        parts = []
        for word, coefficient in self.terms():
            if word == IDENTITY_WORD:
                text = coefficient.to_text()
                parts.append(f"({text})" if len(coefficient.terms()) > 1 else text)
            else:
                parts.append(coefficient_prefix(coefficient) + word_text(word))
        return join_terms(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"OperatorElement({self.to_text()!r})"


def _operator_or_none(value) -> Optional[OperatorElement]:
    if isinstance(value, OperatorElement):
        return value
    if isinstance(value, (Scalar, Gaussian, int, Fraction)):
        return OperatorElement.scalar(value)
    return None


Factors = Tuple[OperatorElement, ...]


class FormalProduct:
    """Sum of ordered operator products kept unevaluated where Xi meets E.

    Adjacent factors are multiplied out whenever that is possible without
    exchanging Xi and E, so a product that needs no exchange collapses back
    to a single OperatorElement factor.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[List[Tuple[Scalar, Factors]]] = None):
        self._terms: List[Tuple[Scalar, Factors]] = [
            (Scalar.coerce(coefficient), tuple(factors))
            for coefficient, factors in (terms or [])
            if coefficient and all(not factor.is_zero() for factor in factors)
        ]

    @classmethod
    def lift(cls, value) -> "FormalProduct":
        if isinstance(value, FormalProduct):
            return value
        return cls([(ONE, (OperatorElement.coerce(value),))])

    def terms(self) -> List[Tuple[Scalar, Factors]]:
        return list(self._terms)

    def __add__(self, other):
        if not isinstance(other, (FormalProduct, OperatorElement, Scalar, int, Fraction, Gaussian)):
            return NotImplemented
        return FormalProduct(self._terms + FormalProduct.lift(other)._terms)

    __radd__ = __add__

    def __neg__(self) -> "FormalProduct":
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, (FormalProduct, OperatorElement, Scalar, int, Fraction, Gaussian)):
            return NotImplemented
        return self + (-FormalProduct.lift(other))

    def __rsub__(self, other):
        return FormalProduct.lift(other) + (-self)

    def scale(self, factor) -> "FormalProduct":
        factor = Scalar.coerce(factor)
        return FormalProduct([(coefficient * factor, factors) for coefficient, factors in self._terms])

    def __mul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, (FormalProduct, OperatorElement)):
            return NotImplemented
        right = FormalProduct.lift(other)
        terms = []
        for left_coefficient, left_factors in self._terms:
            for right_coefficient, right_factors in right._terms:
                terms.append((left_coefficient * right_coefficient, _concatenate(left_factors, right_factors)))
        return FormalProduct(terms)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, Gaussian, int, Fraction)):
            return self.scale(other)
        if isinstance(other, OperatorElement):
            return FormalProduct.lift(other) * self
        return NotImplemented

    def apply(self, ket: KetCombination) -> KetCombination:
        total = KetCombination()
        for coefficient, factors in self._terms:
            state = ket
            for factor in reversed(factors):
                state = factor.apply(state)
            total = total + state.scale(coefficient)
        return total

    def to_text(self) -> str:
        parts = []
        for coefficient, factors in self._terms:
            body = "*".join(f"({factor.to_text()})" for factor in factors)
            parts.append(coefficient_prefix(coefficient) + body)
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"FormalProduct({self.to_text()!r})"


def _concatenate(left: Factors, right: Factors) -> Factors:
    factors = list(left)
    for factor in right:
        if factors:
            try:
                factors[-1] = factors[-1] * factor
                continue
            except DeferredOrderingError:
                pass
        factors.append(factor)
    return tuple(factors)


AnyOperator = Union[OperatorElement, FormalProduct]


def op_product(left: AnyOperator, right: AnyOperator) -> AnyOperator:
    """Normal-ordered product, or a FormalProduct when Xi would cross E."""
    if isinstance(left, OperatorElement) and isinstance(right, OperatorElement):
        try:
            return left * right
        except DeferredOrderingError:
            logger.debug("deferring an E-Xi exchange to the ket action")
            return FormalProduct.lift(left) * right
    return FormalProduct.lift(left) * right


def op_commutator(left: AnyOperator, right: AnyOperator) -> AnyOperator:
    forward = op_product(left, right)
    backward = op_product(right, left)
    if isinstance(forward, OperatorElement) and isinstance(backward, OperatorElement):
        return forward - backward
    return FormalProduct.lift(forward) - backward


def op_adjoint(operator: OperatorElement) -> OperatorElement:
    return operator.adjoint()


def apply_ket(operator: AnyOperator, n: int) -> KetCombination:
    return operator.apply(KetCombination.basis(n))


def matrix_element(operator: AnyOperator, bra: int, ket: int) -> Scalar:
    """<bra| operator |ket>."""
    return apply_ket(operator, ket).coefficient(bra)
