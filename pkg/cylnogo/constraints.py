"""
cylnogo/constraints.py

Turns an operator residual into scalar equations (one per normal-ordered word)
and solves the ones that are linear in a chosen set of unknown parameters by
exact Gaussian elimination. Other parameters may appear in the coefficients;
pivots are only taken on constant coefficients, so no division by a
polynomial ever happens.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from cylnogo.errors import SolveError
from cylnogo.operators import OperatorElement, word_text
from cylnogo.scalars import Scalar, ZERO, validate_parameter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Constraint:
    equation: Scalar
    provenance: str

    def to_text(self) -> str:
        return f"{self.equation.to_text()} = 0 [{self.provenance}]"


@dataclass(frozen=True)
class ConstraintSet:
    constraints: Tuple[Constraint, ...] = ()

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def is_empty(self) -> bool:
        return not self.constraints


def extract_constraints(operator: OperatorElement) -> ConstraintSet:
    """Every coefficient of the residual must vanish; tag each with its word."""
    return ConstraintSet(tuple(Constraint(coefficient, word_text(word)) for word, coefficient in operator.terms()))


class SolveStatus(str, Enum):
    SOLVED = "solved"
    INCONSISTENT = "inconsistent"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class Solution:
    status: SolveStatus
    assignment: Dict[str, Scalar] = field(default_factory=dict)
    free: Tuple[str, ...] = ()
    certificate: Optional[Constraint] = None
    side_conditions: Tuple[Constraint, ...] = ()

    def to_text(self) -> str:
        if self.status is SolveStatus.INCONSISTENT:
            return f"inconsistent: {self.certificate.to_text()}"
        parts = [f"{name} = {value.to_text()}" for name, value in sorted(self.assignment.items())]
        if self.free:
            parts.append(f"free: {', '.join(self.free)}")
        for condition in self.side_conditions:
            parts.append(f"provided {condition.to_text()}")
        return f"{self.status.value}: " + ("; ".join(parts) if parts else "no constraints")


class _Row:
    """Normalized equation sum(coefficients[u] * u) = rhs with coefficient 1 on its pivot."""

    def __init__(self, coefficients: Dict[str, Scalar], rhs: Scalar, provenance: str):
        self.coefficients = coefficients
        self.rhs = rhs
        self.provenance = provenance

    def subtract(self, factor: Scalar, other: "_Row") -> None:
        for name, value in other.coefficients.items():
            updated = self.coefficients.get(name, ZERO) - factor * value
            if updated:
                self.coefficients[name] = updated
            else:
                self.coefficients.pop(name, None)
        self.rhs = self.rhs - factor * other.rhs


def solve_linear(constraints: Iterable[Constraint], unknowns: Iterable[str]) -> Solution:
    unknowns = tuple(sorted({validate_parameter(name) for name in unknowns}))
    pivots: Dict[str, _Row] = {}
    side_conditions: List[Constraint] = []

    for constraint in constraints:
        coefficients, rest = constraint.equation.linear_split(unknowns)
        row = _Row(coefficients, -rest, constraint.provenance)
        for name, pivot_row in list(pivots.items()):
            factor = row.coefficients.get(name)
            if factor:
                row.subtract(factor, pivot_row)

        if not row.coefficients:
            if row.rhs.is_zero():
                continue
            reduced = Constraint(-row.rhs, row.provenance)
            if row.rhs.is_constant():
                logger.debug(f"unsatisfiable equation {reduced.to_text()}")
                return Solution(
                    SolveStatus.INCONSISTENT,
                    certificate=reduced,
                    side_conditions=tuple(side_conditions),
                )
            side_conditions.append(reduced)
            continue

        candidates = [name for name in sorted(row.coefficients) if row.coefficients[name].is_constant()]
        if not candidates:
            raise SolveError(
                f"no unknown has an invertible coefficient in {constraint.to_text()}; "
                f"unknowns {', '.join(unknowns)}"
            )
        pivot = candidates[0]
        lead = row.coefficients[pivot]
        row.coefficients = {name: value / lead for name, value in row.coefficients.items()}
        row.rhs = row.rhs / lead
        for other in pivots.values():
            factor = other.coefficients.get(pivot)
            if factor:
                other.subtract(factor, row)
        pivots[pivot] = row
        logger.debug(f"pivot {pivot} from [{row.provenance}]")

    assignment = {}
    for name, row in pivots.items():
        value = row.rhs
        for other, coefficient in row.coefficients.items():
            if other != name:
                value = value - coefficient * Scalar.parameter(other)
        assignment[name] = value
    free = tuple(name for name in unknowns if name not in pivots)
    status = SolveStatus.UNDERDETERMINED if free else SolveStatus.SOLVED
    return Solution(status, assignment, free, side_conditions=tuple(side_conditions))
