"""
cylnogo/quantization.py

Quantization schemes as executable maps from classical observables to
operators:

    type-i   Q(l) = D + nu, Q(e^{+-i theta}) = lambda E^{+-1}, Q(1) = I
    type-ii  Q(l) = mu, Q(e^{+-i theta}) = 0, Q(1) = 1   (acting on C)
    pos-rep  Q(e^{iN theta}) = E^N,
             Q(l e^{iN theta}) = E^N (D + iN eta + N/2 + nu)

Von Neumann rules extend a scheme with explicit table entries. Bracket
expressions quantize by the axiom Q({f,g}) = i[Q(f),Q(g)], so any classical
relation between brackets turns into an operator residual.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Mapping, Optional, Tuple

from cylnogo.classical import ClassicalElement, cos, ell, poisson_bracket, sin
from cylnogo.errors import DomainMissError, SchemeError
from cylnogo.operators import OperatorElement, op_commutator
from cylnogo.scalars import Gaussian, I_UNIT, ONE, Scalar, ZERO, join_terms, validate_parameter

logger = logging.getLogger(__name__)

Key = Tuple[int, int]

HALF = Fraction(1, 2)
HALF_I = Gaussian(0, HALF)
HALF_OVER_I = Gaussian(0, -HALF)

# parameters a build may leave formal, plus lambda which defaults to 1
SCHEME_PARAMETERS = ("nu", "eta", "mu", "alpha", "b", "c", "bp", "cp", "lambda")


class SchemeKind(str, Enum):
    TYPE_I = "type-i"
    TYPE_II = "type-ii"
    POS_REP = "pos-rep"
    VN_TABLE = "vn-table"


@dataclass(frozen=True)
class SchemeEntry:
    key: ClassicalElement
    value: OperatorElement
    pivot: Key
    lead: Gaussian
    source: str


@dataclass(frozen=True)
class QuantScheme:
    """Echelon table of (classical key, operator) pairs over a base representation.

    Every entry owns a distinct pivot monomial (the leading monomial of its
    key, with a constant coefficient). Quantizing reduces an observable
    against the pivots; a leftover monomial is a domain miss.
    """

    name: str
    kind: SchemeKind
    base: SchemeKind
    bindings: Mapping[str, Scalar]
    entries: Tuple[SchemeEntry, ...] = ()
    rules: Tuple[str, ...] = ()
    _pivots: Dict[Key, SchemeEntry] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_pivots", {entry.pivot: entry for entry in self.entries})

    @property
    def parameters(self) -> Tuple[str, ...]:
        """Parameters still formal in this scheme's table."""
        found = set()
        for entry in self.entries:
            found |= entry.key.parameters()
            for _, coefficient in entry.value.terms():
                found |= coefficient.parameters()
        return tuple(sorted(found))

    @property
    def is_one_dimensional(self) -> bool:
        return self.base is SchemeKind.TYPE_II

    def param(self, name: str) -> Scalar:
        name = validate_parameter(name)
        return self.bindings.get(name, Scalar.parameter(name))

    def _entry_at(self, pivot: Key) -> Optional[SchemeEntry]:
        entry = self._pivots.get(pivot)
        if entry is None and self.base is SchemeKind.POS_REP and pivot[0] <= 1:
            entry = _position_entry(self, *pivot)
        return entry

    def quantize(self, observable) -> OperatorElement:
        remainder = ClassicalElement.coerce(observable).substitute(self.bindings)
        result = OperatorElement()
        while not remainder.is_zero():
            pivot = remainder.leading_key()
            entry = self._entry_at(pivot)
            if entry is None:
                raise DomainMissError(
                    f"l^{pivot[0]} e^(i{pivot[1]} theta) lies outside the domain of scheme '{self.name}'"
                )
            factor = remainder.coefficient(*pivot) / entry.lead
            remainder = remainder - entry.key.scale(factor)
            result = result + entry.value.scale(factor)
        return result

    def in_domain(self, observable) -> bool:
        try:
            self.quantize(observable)
        except DomainMissError:
            return False
        return True

    def install(self, key: ClassicalElement, value: OperatorElement, source: str) -> "QuantScheme":
        """Return a new scheme with key -> value added in echelon form."""
        key = key.substitute(self.bindings)
        while True:
            if key.is_zero():
                raise SchemeError(f"rule '{source}' is redundant in scheme '{self.name}'")
            pivot = key.leading_key()
            entry = self._entry_at(pivot)
            if entry is None:
                break
            factor = key.coefficient(*pivot) / entry.lead
            key = key - entry.key.scale(factor)
            value = value - entry.value.scale(factor)
        lead = key.coefficient(*pivot)
        if not lead.is_constant():
            raise SchemeError(f"rule '{source}' has the non-constant pivot coefficient {lead.to_text()}")
        logger.debug(f"scheme {self.name}: {source} installed at pivot {pivot}")
        return replace(
            self,
            kind=SchemeKind.VN_TABLE,
            entries=self.entries + (SchemeEntry(key, value, pivot, lead.constant_value(), source),),
            rules=self.rules + (source,),
        )


def _position_entry(scheme: QuantScheme, r: int, n: int) -> SchemeEntry:
    if r == 0:
        value = OperatorElement.shift(n)
    else:
        shift = Scalar.constant(Gaussian(Fraction(n, 2), 0)) + scheme.param("eta") * Gaussian(0, n) + scheme.param("nu")
        value = OperatorElement({(n, 0, 1): 1, (n, 0, 0): shift})
    return SchemeEntry(ClassicalElement.monomial(r, n), value, (r, n), Gaussian(1), "pos-rep")


def _normalize_bindings(bindings: Optional[Mapping[str, object]]) -> Dict[str, Scalar]:
    """None or 'formal' leaves a parameter formal; lambda defaults to 1."""
    values: Dict[str, Scalar] = {"lambda": ONE}
    for name, value in (bindings or {}).items():
        name = validate_parameter(name)
        if value is None or value == "formal":
            values.pop(name, None)
        else:
            values[name] = Scalar.coerce(value)
    return values


def build_scheme(kind, bindings: Optional[Mapping[str, object]] = None, name: Optional[str] = None) -> QuantScheme:
    if isinstance(kind, str):
        kind = kind.replace("_", "-")
    try:
        kind = SchemeKind(kind)
    except ValueError:
        raise SchemeError(f"unknown scheme kind '{kind}'; known kinds: {', '.join(k.value for k in SchemeKind)}")
    if kind is SchemeKind.VN_TABLE:
        raise SchemeError("vn-table schemes are produced by vn_extend, not built directly")
    scheme = QuantScheme(name=name or kind.value, kind=kind, base=kind, bindings=_normalize_bindings(bindings))
    if kind is SchemeKind.POS_REP:
        return scheme

    if kind is SchemeKind.TYPE_I:
        lam = scheme.param("lambda")
        table = [
            (ClassicalElement.constant(1), OperatorElement.identity()),
            (ell(), OperatorElement.derivative() + OperatorElement.scalar(scheme.param("nu"))),
            (ClassicalElement.monomial(0, 1), OperatorElement.shift(1).scale(lam)),
            (ClassicalElement.monomial(0, -1), OperatorElement.shift(-1).scale(lam)),
        ]
    else:
        table = [
            (ClassicalElement.constant(1), OperatorElement.identity()),
            (ell(), OperatorElement.scalar(scheme.param("mu"))),
            (ClassicalElement.monomial(0, 1), OperatorElement()),
            (ClassicalElement.monomial(0, -1), OperatorElement()),
        ]
    entries = tuple(SchemeEntry(key, value, key.leading_key(), Gaussian(1), kind.value) for key, value in table)
    return replace(scheme, entries=entries)


# Von Neumann rules


@dataclass(frozen=True)
class VonNeumannRule:
    name: str
    statement: str
    key: Callable[[QuantScheme], ClassicalElement]
    value: Callable[[QuantScheme], OperatorElement]
    requires: Mapping[str, object] = field(default_factory=dict)


def _generators(scheme: QuantScheme):
    try:
        return scheme.quantize(ell()), scheme.quantize(sin()), scheme.quantize(cos())
    except DomainMissError as error:
        raise SchemeError(f"scheme '{scheme.name}' lacks a basic generator: {error}") from error


def _alpha_polynomials(scheme: QuantScheme):
    alpha = scheme.param("alpha")
    quadratic = ell(2) + ell().scale(alpha * 2)
    cubic = ell(3) + ell(2).scale(alpha * 3)
    quartic = ell(4) + ell(3).scale(alpha * 4) + ell(2).scale(alpha * alpha * 4)
    return quadratic, cubic, quartic


def _l2(scheme):
    L, _, _ = _generators(scheme)
    return L * L + L.scale(scheme.param("b")) + OperatorElement.scalar(scheme.param("c"))


def _ls(scheme):
    L, S, C = _generators(scheme)
    return S * L - C.scale(HALF_I) + S.scale(scheme.param("b") / 2)


def _lc(scheme):
    L, S, C = _generators(scheme)
    return C * L + S.scale(HALF_I) + C.scale(scheme.param("b") / 2)


def _l2s(scheme):
    L, S, C = _generators(scheme)
    return S * L * L - (C * L).scale(I_UNIT) + S.scale(Fraction(1, 4))


def _l2c(scheme):
    L, S, C = _generators(scheme)
    return C * L * L + (S * L).scale(I_UNIT) + C.scale(Fraction(1, 4))


def _cubic(scheme):
    L, _, _ = _generators(scheme)
    alpha = scheme.param("alpha")
    return L ** 3 + (L * L).scale(alpha * 3) + L.scale(scheme.param("bp")) + OperatorElement.scalar(scheme.param("cp"))


def _l2s_alpha(scheme):
    L, S, C = _generators(scheme)
    alpha = scheme.param("alpha")
    third = (scheme.param("bp") + 1) / 3
    return (
        S * L * L
        + (S.scale(alpha * 2) - C.scale(I_UNIT)) * L
        + S.scale(third)
        - C.scale(alpha * I_UNIT)
    )


def _l2c_alpha(scheme):
    L, S, C = _generators(scheme)
    alpha = scheme.param("alpha")
    third = (scheme.param("bp") + 1) / 3
    return (
        C * L * L
        + (C.scale(alpha * 2) + S.scale(I_UNIT)) * L
        + C.scale(third)
        + S.scale(alpha * I_UNIT)
    )


def _quartic(scheme, lead, partner, sign: int):
    """Shared shape of the degree-4 rules; sign is -1 for sine and +1 for cosine."""
    L, _, _ = _generators(scheme)
    alpha = scheme.param("alpha")
    i = I_UNIT * sign
    alpha2 = alpha * alpha
    return (
        lead * L ** 4
        + (lead.scale(alpha * 4) + partner.scale(i * 2)) * L ** 3
        + (lead.scale(alpha2 * 4 + 2) + partner.scale(i * alpha * 6)) * L ** 2
        + (lead.scale(alpha * 4) + partner.scale(i * (alpha2 * 4 + 1))) * L
        + lead.scale(alpha2 + Fraction(1, 4))
        + partner.scale(i * alpha)
    )


def _l4s(scheme):
    _, S, C = _generators(scheme)
    return _quartic(scheme, S, C, -1)


def _l4c(scheme):
    _, S, C = _generators(scheme)
    return _quartic(scheme, C, S, 1)


RULES: Dict[str, VonNeumannRule] = {
    rule.name: rule
    for rule in (
        VonNeumannRule("l2", "Q(l^2) = Q(l)^2 + bQ(l) + cI", lambda s: ell(2), _l2),
        VonNeumannRule("ls", "Q(l sin) = Q(sin)Q(l) - (i/2)Q(cos) + (b/2)Q(sin)", lambda s: ell() * sin(), _ls),
        VonNeumannRule("lc", "Q(l cos) = Q(cos)Q(l) + (i/2)Q(sin) + (b/2)Q(cos)", lambda s: ell() * cos(), _lc),
        VonNeumannRule(
            "l2s", "Q(l^2 sin) = Q(sin)Q(l)^2 - iQ(cos)Q(l) + 1/4 Q(sin)", lambda s: ell(2) * sin(), _l2s, {"b": 0}
        ),
        VonNeumannRule(
            "l2c", "Q(l^2 cos) = Q(cos)Q(l)^2 + iQ(sin)Q(l) + 1/4 Q(cos)", lambda s: ell(2) * cos(), _l2c, {"b": 0}
        ),
        VonNeumannRule(
            "cubic",
            "Q(l^3 + 3 alpha l^2) = Q(l)^3 + 3 alpha Q(l)^2 + b'Q(l) + c'I",
            lambda s: _alpha_polynomials(s)[1],
            _cubic,
        ),
        VonNeumannRule(
            "l2s'",
            "Q((l^2 + 2 alpha l) sin) = Q(sin)Q(l)^2 + (2 alpha Q(sin) - iQ(cos))Q(l) + (1+b')/3 Q(sin) - i alpha Q(cos)",
            lambda s: _alpha_polynomials(s)[0] * sin(),
            _l2s_alpha,
        ),
        VonNeumannRule(
            "l2c'",
            "Q((l^2 + 2 alpha l) cos) = Q(cos)Q(l)^2 + (2 alpha Q(cos) + iQ(sin))Q(l) + (1+b')/3 Q(cos) + i alpha Q(sin)",
            lambda s: _alpha_polynomials(s)[0] * cos(),
            _l2c_alpha,
        ),
        VonNeumannRule(
            "l4s",
            "Q((l^4 + 4 alpha l^3 + 4 alpha^2 l^2) sin) with leading word Q(sin)Q(l)^4",
            lambda s: _alpha_polynomials(s)[2] * sin(),
            _l4s,
        ),
        VonNeumannRule(
            "l4c",
            "Q((l^4 + 4 alpha l^3 + 4 alpha^2 l^2) cos) with leading word Q(cos)Q(l)^4",
            lambda s: _alpha_polynomials(s)[2] * cos(),
            _l4c,
        ),
    )
}

RULE_ALIASES = {"l2sp": "l2s'", "l2cp": "l2c'"}


def _rule(name: str) -> VonNeumannRule:
    name = RULE_ALIASES.get(name, name)
    if name not in RULES:
        raise SchemeError(f"unknown rule '{name}'; known rules: {', '.join(RULES)}")
    return RULES[name]


def rule_value(scheme: QuantScheme, name: str) -> OperatorElement:
    """Right-hand side of a rule evaluated in the scheme, without installing it."""
    rule = _rule(name)
    for parameter, required in rule.requires.items():
        bound = scheme.bindings.get(parameter)
        if bound is None or bound != Scalar.coerce(required):
            raise SchemeError(f"rule '{rule.name}' requires {parameter} = {required} in scheme '{scheme.name}'")
    return rule.value(scheme)


def vn_extend(scheme: QuantScheme, name: str) -> QuantScheme:
    rule = _rule(name)
    extended = scheme.install(rule.key(scheme), rule_value(scheme, rule.name), rule.name)
    logger.info(f"scheme {scheme.name}: rule {rule.name} installed")
    return extended


def extend_with(scheme: QuantScheme, names) -> QuantScheme:
    for name in names:
        scheme = vn_extend(scheme, name)
    return scheme


# bracket expressions and relations


class BracketExpr:
    """Classical expression built from observables, brackets and linear combinations."""

    def classical(self) -> ClassicalElement:
        raise NotImplementedError

    def quantized(self, scheme: QuantScheme) -> OperatorElement:
        raise NotImplementedError

    def __add__(self, other) -> "Combination":
        return Combination(((ONE, self), (ONE, as_expr(other))))

    __radd__ = __add__

    def __sub__(self, other) -> "Combination":
        return Combination(((ONE, self), (-ONE, as_expr(other))))

    def __rsub__(self, other) -> "Combination":
        return Combination(((ONE, as_expr(other)), (-ONE, self)))

    def __neg__(self) -> "Combination":
        return Combination(((-ONE, self),))

    def __rmul__(self, factor) -> "Combination":
        return Combination(((Scalar.coerce(factor), self),))

    __mul__ = __rmul__


@dataclass(frozen=True, eq=False)
class Observable(BracketExpr):
    element: ClassicalElement

    def classical(self) -> ClassicalElement:
        return self.element

    def quantized(self, scheme: QuantScheme) -> OperatorElement:
        return scheme.quantize(self.element)


@dataclass(frozen=True, eq=False)
class Bracket(BracketExpr):
    left: BracketExpr
    right: BracketExpr

    def classical(self) -> ClassicalElement:
        return poisson_bracket(self.left.classical(), self.right.classical())

    def quantized(self, scheme: QuantScheme) -> OperatorElement:
        # operators on a one-dimensional space all commute
        if scheme.is_one_dimensional:
            return OperatorElement()
        commutator = op_commutator(self.left.quantized(scheme), self.right.quantized(scheme))
        return commutator.scale(I_UNIT)


@dataclass(frozen=True, eq=False)
class Combination(BracketExpr):
    parts: Tuple[Tuple[Scalar, BracketExpr], ...]

    def classical(self) -> ClassicalElement:
        total = ClassicalElement()
        for factor, part in self.parts:
            total = total + part.classical().scale(factor)
        return total

    def quantized(self, scheme: QuantScheme) -> OperatorElement:
        total = OperatorElement()
        for factor, part in self.parts:
            total = total + part.quantized(scheme).scale(factor)
        return total


def as_expr(value) -> BracketExpr:
    if isinstance(value, BracketExpr):
        return value
    return Observable(ClassicalElement.coerce(value))


def pb(left, right) -> Bracket:
    return Bracket(as_expr(left), as_expr(right))


@dataclass(frozen=True)
class Relation:
    name: str
    lhs: BracketExpr
    rhs: BracketExpr
    statement: str

    def __post_init__(self):
        object.__setattr__(self, "lhs", as_expr(self.lhs))
        object.__setattr__(self, "rhs", as_expr(self.rhs))

    def holds_classically(self) -> bool:
        return self.lhs.classical() == self.rhs.classical()

    def residual(self, scheme: QuantScheme) -> OperatorElement:
        return self.lhs.quantized(scheme) - self.rhs.quantized(scheme)


def relation_residual(scheme: QuantScheme, relation: Relation) -> OperatorElement:
    return relation.residual(scheme)


def bracket_residual(scheme: QuantScheme, f, g) -> OperatorElement:
    """Q({f,g}) - i[Q(f),Q(g)]; zero exactly when the bracket axiom holds on the pair."""
    f, g = ClassicalElement.coerce(f), ClassicalElement.coerce(g)
    return scheme.quantize(poisson_bracket(f, g)) - pb(f, g).quantized(scheme)


# displays in terms of Q(sin), Q(cos) and Q(l) = D + nu


def expand_in_q_ell(operator: OperatorElement, nu) -> Dict[int, Dict[int, Scalar]]:
    """Rewrite sum E^m a_mk D^k as sum E^m b_mj (D + nu)^j."""
    nu = Scalar.coerce(nu)
    expansion: Dict[int, Dict[int, Scalar]] = {}
    for (m, p, k), coefficient in operator.terms():
        if p:
            raise ValueError("operators with Xi have no display in Q(l)")
        row = expansion.setdefault(m, {})
        for j in range(k + 1):
            row[j] = row.get(j, ZERO) + coefficient * comb(k, j) * (-nu) ** (k - j)
    return {
        m: {j: value for j, value in row.items() if value}
        for m, row in expansion.items()
        if any(row.values())
    }


def generator_display(operator: OperatorElement, nu) -> Dict[Tuple[str, int], Scalar]:
    """Coefficients of Q(sin)Q(l)^j, Q(cos)Q(l)^j and Q(l)^j (keys 'sin', 'cos', 'id')."""
    expansion = expand_in_q_ell(operator, nu)
    stray = sorted(set(expansion) - {-1, 0, 1})
    if stray:
        raise ValueError(f"E powers {stray} have no display in Q(sin) and Q(cos)")
    display: Dict[Tuple[str, int], Scalar] = {}
    plus, minus = expansion.get(1, {}), expansion.get(-1, {})
    for j in sorted(set(plus) | set(minus)):
        upper, lower = plus.get(j, ZERO), minus.get(j, ZERO)
        if upper + lower:
            display[("cos", j)] = upper + lower
        if upper - lower:
            display[("sin", j)] = (upper - lower) * I_UNIT
    for j, value in expansion.get(0, {}).items():
        display[("id", j)] = value
    return display


def display_text(display: Mapping[Tuple[str, int], Scalar]) -> str:
    parts = []
    for (generator, power), coefficient in sorted(display.items(), key=lambda item: (-item[0][1], item[0][0])):
        factors = [] if generator == "id" else [f"Q({generator})"]
        if power:
            factors.append("Q(l)" if power == 1 else f"Q(l)^{power}")
        body = "*".join(factors)
        if not body:
            text = coefficient.to_text()
            parts.append(f"({text})" if len(coefficient.terms()) > 1 else text)
        elif coefficient == 1:
            parts.append(body)
        elif coefficient == -1:
            parts.append("-" + body)
        elif len(coefficient.terms()) > 1:
            parts.append(f"({coefficient.to_text()})*{body}")
        else:
            parts.append(f"{coefficient.to_text()}*{body}")
    return join_terms(parts)
