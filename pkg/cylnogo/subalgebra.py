"""
cylnogo/subalgebra.py

Finite-cutoff exploration of Poisson subalgebras of the cylinder algebra.

Everything lives in a box l-degree <= R, |harmonic| <= M. A closure keeps
bracketing (and optionally multiplying) the elements it has generated until
nothing new lands inside the box; results that leave the box are dropped, so
a negative membership answer only means "not found at this cutoff".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from cylnogo.classical import ClassicalElement, ell, exp_i, ladder, poisson_bracket
from cylnogo.errors import CutoffError, ParameterError
from cylnogo.scalars import Scalar

logger = logging.getLogger(__name__)

Key = Tuple[int, int]
Cutoff = Tuple[int, int]


def _instantiate(element: ClassicalElement, assignment: Mapping[str, object]) -> ClassicalElement:
    element = element.substitute(assignment) if assignment else element
    leftover = element.parameters()
    if leftover:
        raise ParameterError(f"{element.to_text()} still has formal parameters {sorted(leftover)}")
    return element


class _Echelon:
    """Mutable reduced echelon form; each row has coefficient 1 at its pivot (its leading key)."""

    def __init__(self, rows: Optional[Dict[Key, ClassicalElement]] = None):
        self.rows: Dict[Key, ClassicalElement] = dict(rows or {})

    def reduce(self, element: ClassicalElement) -> Tuple[ClassicalElement, Dict[Key, Scalar]]:
        coefficients: Dict[Key, Scalar] = {}
        remainder = element
        # rows are fully reduced, so one pass over the original support suffices
        for pivot, row in self.rows.items():
            factor = remainder.coefficient(*pivot)
            if factor:
                coefficients[pivot] = factor
                remainder = remainder - row.scale(factor)
        return remainder, coefficients

    def insert(self, element: ClassicalElement) -> Optional[ClassicalElement]:
        remainder, _ = self.reduce(element)
        if remainder.is_zero():
            return None
        pivot = remainder.leading_key()
        row = remainder.scale(Scalar.coerce(1) / remainder.coefficient(*pivot))
        for key, other in list(self.rows.items()):
            factor = other.coefficient(*pivot)
            if factor:
                self.rows[key] = other - row.scale(factor)
        self.rows[pivot] = row
        return remainder


@dataclass(frozen=True)
class FilteredBasis:
    """Reduced echelon basis of a subspace of the cutoff box."""

    cutoff: Cutoff
    vectors: Tuple[ClassicalElement, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    @property
    def pivots(self) -> List[Key]:
        return [vector.leading_key() for vector in self.vectors]

    @property
    def box_dimension(self) -> int:
        degree, harmonic = self.cutoff
        return (degree + 1) * (2 * harmonic + 1)

    def is_full_box(self) -> bool:
        return self.dimension == self.box_dimension

    def _echelon(self) -> _Echelon:
        return _Echelon({vector.leading_key(): vector for vector in self.vectors})

    @classmethod
    def _from_echelon(cls, cutoff: Cutoff, echelon: _Echelon) -> "FilteredBasis":
        return cls(cutoff, tuple(echelon.rows[pivot] for pivot in sorted(echelon.rows)))

    @classmethod
    def span(cls, elements: Iterable[ClassicalElement], cutoff: Cutoff) -> "FilteredBasis":
        echelon = _Echelon()
        for element in elements:
            _check_within(element, cutoff)
            echelon.insert(_instantiate(element, {}))
        return cls._from_echelon(cutoff, echelon)


def _check_within(element: ClassicalElement, cutoff: Cutoff) -> None:
    if not element.within(*cutoff):
        raise CutoffError(f"{element.to_text()} does not fit in the cutoff box {cutoff}")


def closure(
    generators: Sequence[ClassicalElement],
    cutoff: Cutoff,
    assignment: Optional[Mapping[str, object]] = None,
    products: bool = False,
) -> FilteredBasis:
    """Least subspace of the box containing the generators and closed under the bracket.

    Pairs are processed in generation order and every candidate is reduced
    before insertion. With products=True pairwise products are added as well.
    """
    assignment = assignment or {}
    echelon = _Echelon()
    generated: List[ClassicalElement] = []
    for generator in generators:
        generator = _instantiate(ClassicalElement.coerce(generator), assignment)
        _check_within(generator, cutoff)
        added = echelon.insert(generator)
        if added is not None:
            generated.append(added)

    discarded = 0
    index = 0
    while index < len(generated):
        current = generated[index]
        for other in generated[: index + 1]:
            candidates = [poisson_bracket(other, current)]
            if products:
                candidates.append(other * current)
            for candidate in candidates:
                if candidate.is_zero():
                    continue
                if not candidate.within(*cutoff):
                    discarded += 1
                    continue
                added = echelon.insert(candidate)
                if added is not None:
                    generated.append(added)
        index += 1
        logger.debug(f"closure: processed {index} of {len(generated)} generated elements")

    basis = FilteredBasis._from_echelon(cutoff, echelon)
    logger.debug(f"closure at {cutoff}: dimension {basis.dimension}, {discarded} candidates left the box")
    return basis


class Membership(str, Enum):
    CERTIFIED_IN = "certified_in"
    NOT_FOUND_AT_CUTOFF = "not_found_at_cutoff"


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    coefficients: Dict[Key, Scalar] = field(default_factory=dict)
    remainder: ClassicalElement = field(default_factory=ClassicalElement)

    @property
    def certified(self) -> bool:
        return self.status is Membership.CERTIFIED_IN

    def to_text(self) -> str:
        if not self.certified:
            return f"not found at cutoff (remainder {self.remainder.to_text()})"
        parts = [f"{value.to_text()} @ {pivot}" for pivot, value in sorted(self.coefficients.items())]
        return "certified in: " + ", ".join(parts)


def member(f: ClassicalElement, basis: FilteredBasis, assignment: Optional[Mapping[str, object]] = None) -> MembershipResult:
    f = _instantiate(ClassicalElement.coerce(f), assignment or {})
    if not f.within(*basis.cutoff):
        return MembershipResult(Membership.NOT_FOUND_AT_CUTOFF, remainder=f)
    remainder, coefficients = basis._echelon().reduce(f)
    if remainder.is_zero():
        return MembershipResult(Membership.CERTIFIED_IN, coefficients)
    return MembershipResult(Membership.NOT_FOUND_AT_CUTOFF, remainder=remainder)


@dataclass(frozen=True)
class ProbeReport:
    degree: int
    seed: int
    cutoff: int
    reached: Tuple[int, ...]
    fixed_seed: bool

    @property
    def missing(self) -> Tuple[int, ...]:
        return tuple(m for m in range(-self.cutoff, self.cutoff + 1) if m not in self.reached)

    @property
    def complete(self) -> bool:
        return not self.missing


def irreducibility_probe(r: int, seed_m: int, cutoff_m: int) -> ProbeReport:
    """Harmonics reachable from e^r_seed by the ladders L_k, |k| <= cutoff_m."""
    if abs(seed_m) > cutoff_m:
        raise CutoffError(f"seed harmonic {seed_m} exceeds the cutoff {cutoff_m}")
    reached = {seed_m}
    frontier = [seed_m]
    while frontier:
        m = frontier.pop()
        source = ClassicalElement.monomial(r, m)
        for k in range(-cutoff_m, cutoff_m + 1):
            target = m + k
            if abs(target) > cutoff_m or target in reached:
                continue
            # L_k(e^r_m) vanishes exactly when m = kr
            if not ladder(k, source).is_zero():
                reached.add(target)
                frontier.append(target)
    fixed = len(reached) == 1 and cutoff_m > 0
    if fixed:
        logger.debug(f"e^{r}_{seed_m} is fixed by every ladder; choose a different seed")
    return ProbeReport(r, seed_m, cutoff_m, tuple(sorted(reached)), fixed)


@dataclass(frozen=True)
class ScanEntry:
    degree: int
    harmonic: int
    target: ClassicalElement
    witness: Optional[ClassicalElement]

    @property
    def found(self) -> bool:
        return self.witness is not None


def leading_term_scan(basis: FilteredBasis, alpha) -> List[ScanEntry]:
    """For each (r, N) of opposite parity, look for e^r_N + r alpha e^{r-1}_N + lower-degree terms."""
    alpha = Scalar.coerce(alpha)
    degree_cutoff, harmonic_cutoff = basis.cutoff
    entries = []
    for r in range(1, degree_cutoff + 1):
        candidates = [vector for vector in basis.vectors if vector.degree <= r]
        for N in range(-harmonic_cutoff, harmonic_cutoff + 1):
            if (r + N) % 2 == 0:
                continue
            target = ClassicalElement({(r, N): 1, (r - 1, N): alpha * r})
            entries.append(ScanEntry(r, N, target, _leading_witness(candidates, target, r)))
    return entries


def _leading_witness(candidates: Sequence[ClassicalElement], target: ClassicalElement, r: int) -> Optional[ClassicalElement]:
    """Combination of candidates whose degree r and r-1 parts equal target, if one exists."""

    def project(element: ClassicalElement) -> ClassicalElement:
        return element.homogeneous_part(r) + element.homogeneous_part(r - 1)

    rows: Dict[Key, Tuple[ClassicalElement, ClassicalElement]] = {}
    for candidate in candidates:
        projected, full = project(candidate), candidate
        while not projected.is_zero():
            pivot = projected.leading_key()
            if pivot not in rows:
                lead = projected.coefficient(*pivot)
                rows[pivot] = (projected.scale(Scalar.coerce(1) / lead), full.scale(Scalar.coerce(1) / lead))
                break
            row_projected, row_full = rows[pivot]
            factor = projected.coefficient(*pivot)
            projected, full = projected - row_projected.scale(factor), full - row_full.scale(factor)

    remainder, witness = target, ClassicalElement()
    while not remainder.is_zero():
        pivot = remainder.leading_key()
        if pivot not in rows:
            return None
        row_projected, row_full = rows[pivot]
        factor = remainder.coefficient(*pivot)
        remainder = remainder - row_projected.scale(factor)
        witness = witness + row_full.scale(factor)
    return witness


# preset generator sets

def basic_generators() -> List[ClassicalElement]:
    """B_C = span{1, e^0_1, e^0_-1, e^1_0}."""
    return [ClassicalElement.constant(1), exp_i(1), exp_i(-1), ell()]


def affine_box_generators(max_harmonic: int) -> List[ClassicalElement]:
    """Monomial basis of P^1 inside the box."""
    return [
        ClassicalElement.monomial(r, m)
        for r in (0, 1)
        for m in range(-max_harmonic, max_harmonic + 1)
    ]


def walpha_generators(max_harmonic: int, alpha="alpha") -> List[ClassicalElement]:
    """B_C plus e^2_n + 2 alpha e^1_n for odd n, |n| <= max_harmonic."""
    alpha = Scalar.parameter(alpha) if isinstance(alpha, str) else Scalar.coerce(alpha)
    odd = [n for n in range(-max_harmonic, max_harmonic + 1) if n % 2]
    return basic_generators() + [ClassicalElement({(2, n): 1, (1, n): alpha * 2}) for n in odd]


PRESETS = {
    "B": lambda cutoff, alpha: basic_generators(),
    "P1": lambda cutoff, alpha: affine_box_generators(cutoff[1]),
    "Walpha": lambda cutoff, alpha: walpha_generators(cutoff[1], alpha),
}


def preset_generators(name: str, cutoff: Cutoff, alpha=Fraction(1, 3)) -> List[ClassicalElement]:
    if name not in PRESETS:
        raise ParameterError(f"unknown generator preset '{name}'; known presets: {', '.join(PRESETS)}")
    return PRESETS[name](cutoff, alpha)
