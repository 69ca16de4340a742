"""
cylnogo/parsing.py

Text front end for scalars, classical observables and operators.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' integer)?
    atom   := integer | '(' expr ')' | name [ '[' signed-int ']' ] [ '(' args ')' ]

Scalar atoms:    i, alpha, nu, eta, b, c, bp, cp, mu, lambda, xi[n]
Classical atoms: l, sin, sin[k], cos, cos[k], E[m], PB(f, g), Lad[k](f), conj(f)
Operator atoms:  D, E[m], Xi, I, Comm(A, B), Adj(A), Q{scheme}(classical)

Division is only by a nonzero constant. Everything the printers emit parses
back to the same value.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import List, Mapping, Optional, Union

from cylnogo.classical import ClassicalElement, cos, ladder, poisson_bracket, sin
from cylnogo.errors import DeferredOrderingError, ParameterError, ParseError
from cylnogo.operators import AnyOperator, FormalProduct, OperatorElement, op_adjoint, op_commutator, op_product
from cylnogo.quantization import QuantScheme, build_scheme
from cylnogo.scalars import BASE_PARAMETERS, I_UNIT, ONE, Scalar

logger = logging.getLogger(__name__)

KINDS = ("scalar", "classical", "operator")

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z]+)|(?P<scheme>\{[^{}]*\})|(?P<symbol>[-+*/^()\[\],]))")

Value = Union[Scalar, ClassicalElement, OperatorElement, FormalProduct]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise ParseError("syntax error", offset, f"unexpected character {text[offset]!r}")
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, kind: str, schemes: Optional[Mapping[str, QuantScheme]]):
        self.tokens = tokenize(text)
        self.index = 0
        self.kind = kind
        self.schemes = dict(schemes or {})

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, symbol: str) -> bool:
        if self.current.kind == "symbol" and self.current.text == symbol:
            self.index += 1
            return True
        return False

    def expect(self, symbol: str) -> None:
        if not self.accept(symbol):
            self.fail(f"expected '{symbol}'")

    def fail(self, detail: str):
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ParseError("syntax error", token.position, f"{detail}, found {found}")

    # grammar

    def parse(self) -> Value:
        value = self.expr()
        if self.current.kind != "end":
            self.fail("expected an operator or the end of input")
        return value

    def expr(self) -> Value:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> Value:
        value = self.unary()
        while True:
            if self.accept("*"):
                value = _multiply(value, self.unary())
            elif self.current.kind == "symbol" and self.current.text == "/":
                position = self.advance().position
                value = _divide(value, self.unary(), position)
            else:
                return value

    def unary(self) -> Value:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Value:
        value = self.atom()
        if self.accept("^"):
            token = self.current
            if token.kind != "number":
                self.fail("expected a nonnegative integer exponent")
            self.advance()
            value = _power(value, int(token.text))
        return value

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        token = self.current
        if token.kind != "number":
            self.fail("expected an integer")
        self.advance()
        return sign * int(token.text)

    def index_argument(self) -> int:
        self.expect("[")
        value = self.integer()
        self.expect("]")
        return value

    def optional_index(self, default: int) -> int:
        if self.current.kind == "symbol" and self.current.text == "[":
            return self.index_argument()
        return default

    def arguments(self, count: int, kind: Optional[str] = None) -> List[Value]:
        saved = self.kind
        if kind is not None:
            self.kind = kind
        self.expect("(")
        values = [self.expr()]
        for _ in range(count - 1):
            self.expect(",")
            values.append(self.expr())
        self.expect(")")
        self.kind = saved
        return values

    def atom(self) -> Value:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Scalar.constant(int(token.text))
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        if token.kind != "name":
            self.fail("expected an operand")
        self.advance()
        name = token.text

        if name == "i":
            return I_UNIT
        if name in BASE_PARAMETERS:
            return Scalar.parameter(name)
        if name == "xi":
            n = self.index_argument()
            try:
                return Scalar.xi(n)
            except ParameterError as error:
                raise ParameterError(f"{error} at offset {token.position}") from error

        if self.kind == "classical":
            return self.classical_atom(name, token)
        if self.kind == "operator":
            return self.operator_atom(name, token)
        raise ParameterError(f"unknown parameter '{name}' at offset {token.position}")

    def classical_atom(self, name: str, token: Token) -> Value:
        if name == "l":
            return ClassicalElement.monomial(1, 0)
        if name == "sin":
            return sin(self.optional_index(1))
        if name == "cos":
            return cos(self.optional_index(1))
        if name == "E":
            return ClassicalElement.monomial(0, self.index_argument())
        if name == "PB":
            left, right = self.arguments(2)
            return poisson_bracket(_classical(left), _classical(right))
        if name == "Lad":
            k = self.index_argument()
            (value,) = self.arguments(1)
            return ladder(k, _classical(value))
        if name == "conj":
            (value,) = self.arguments(1)
            return _classical(value).conjugate()
        raise ParseError("syntax error", token.position, f"'{name}' is not a classical atom or parameter")

    def operator_atom(self, name: str, token: Token) -> Value:
        if name == "D":
            return OperatorElement.derivative()
        if name == "E":
            return OperatorElement.shift(self.index_argument())
        if name == "Xi":
            return OperatorElement.diagonal()
        if name == "I":
            return OperatorElement.identity()
        if name == "Comm":
            left, right = self.arguments(2)
            return op_commutator(_operator(left), _operator(right))
        if name == "Adj":
            (value,) = self.arguments(1)
            value = _operator(value)
            if isinstance(value, FormalProduct):
                raise DeferredOrderingError("the adjoint of a deferred product is not supported")
            return op_adjoint(value)
        if name == "Q":
            scheme_token = self.current
            if scheme_token.kind != "scheme":
                self.fail("expected a scheme name in braces")
            self.advance()
            scheme = self.scheme(scheme_token.text[1:-1].strip())
            (value,) = self.arguments(1, kind="classical")
            return scheme.quantize(_classical(value))
        raise ParseError("syntax error", token.position, f"'{name}' is not an operator atom or parameter")

    def scheme(self, name: str) -> QuantScheme:
        if name in self.schemes:
            return self.schemes[name]
        return build_scheme(name)


def _classical(value: Value) -> ClassicalElement:
    return ClassicalElement.coerce(value)


def _operator(value: Value) -> AnyOperator:
    if isinstance(value, (OperatorElement, FormalProduct)):
        return value
    return OperatorElement.coerce(value)


def _multiply(left: Value, right: Value) -> Value:
    if isinstance(left, Scalar) or isinstance(right, Scalar):
        return left * right
    if isinstance(left, ClassicalElement) and isinstance(right, ClassicalElement):
        return left * right
    return op_product(left, right)


def _divide(left: Value, right: Value, position: int) -> Value:
    if not isinstance(right, Scalar) or not right.is_constant() or right.is_zero():
        raise ParseError("syntax error", position, "division is only by a nonzero constant")
    inverse = ONE / right
    if isinstance(left, Scalar):
        return left * inverse
    return left.scale(inverse)


def _power(value: Value, exponent: int) -> Value:
    if isinstance(value, (OperatorElement, FormalProduct)):
        result: Value = OperatorElement.identity()
        for _ in range(exponent):
            result = op_product(result, value)
        return result
    return value ** exponent


def parse(text: str, kind: str = "classical", schemes: Optional[Mapping[str, QuantScheme]] = None):
    """Parse text into a Scalar, ClassicalElement or operator according to kind."""
    if kind not in KINDS:
        raise ValueError(f"unknown expression kind '{kind}'; expected one of {', '.join(KINDS)}")
    value = _Parser(text, kind, schemes).parse()
    if kind == "classical":
        return _classical(value)
    if kind == "operator":
        return _operator(value)
    return value


def parse_scalar(text: str) -> Scalar:
    return parse(text, "scalar")
