"""
cylnogo/obstructions.py

The bracket relations behind every forced rule and every contradiction, and
the computations that replay them:

1. the identity {{l^2,sin},sin} + {{l^2,cos},cos} = 2 and its operator twin
2. Von Neumann rule derivations and the parameter determinations they force
3. the no-go residuals on the full algebra and on the alpha family
4. the trivial one-dimensional representations
5. the constraint system satisfied by the position representations
6. the diagonal recursion <n|K|n> for the abstract operator Xi
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from cylnogo.classical import ClassicalElement, cos, ell, exp_i, sin
from cylnogo.constraints import Solution, extract_constraints, solve_linear
from cylnogo.operators import (
    AnyOperator,
    KetCombination,
    OperatorElement,
    apply_ket,
    matrix_element,
    op_commutator,
)
from cylnogo.quantization import (
    QuantScheme,
    Relation,
    SchemeKind,
    bracket_residual,
    build_scheme,
    extend_with,
    generator_display,
    pb,
    rule_value,
)
from cylnogo.scalars import Gaussian, I_UNIT, ONE, Scalar, xi_name

logger = logging.getLogger(__name__)

ALPHA = Scalar.parameter("alpha")
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def alpha_quadratic() -> ClassicalElement:
    """l^2 + 2 alpha l"""
    return ell(2) + ell().scale(ALPHA * 2)


def alpha_cubic() -> ClassicalElement:
    """l^3 + 3 alpha l^2"""
    return ell(3) + ell(2).scale(ALPHA * 3)


def alpha_quartic() -> ClassicalElement:
    """l^4 + 4 alpha l^3 + 4 alpha^2 l^2"""
    return ell(4) + ell(3).scale(ALPHA * 4) + ell(2).scale(ALPHA * ALPHA * 4)


def walpha_generator(n: int) -> ClassicalElement:
    """e^2_n + 2 alpha e^1_n"""
    return ClassicalElement({(2, n): 1, (1, n): ALPHA * 2})


def _relations() -> Dict[str, Relation]:
    A2, A3, A4 = alpha_quadratic(), alpha_cubic(), alpha_quartic()
    catalogue = [
        Relation(
            "iden",
            pb(pb(ell(2), sin()), sin()) + pb(pb(ell(2), cos()), cos()),
            2,
            "{{l^2, sin}, sin} + {{l^2, cos}, cos} = 2",
        ),
        Relation(
            "newiden",
            pb(pb(A3, sin()), sin()) + pb(pb(A3, cos()), cos()),
            ell().scale(6) + ClassicalElement.constant(ALPHA * 6),
            "{{l^3 + 3 alpha l^2, sin}, sin} + {{l^3 + 3 alpha l^2, cos}, cos} = 6 l + 6 alpha",
        ),
        Relation("lcos-lsin", pb(ell() * cos(), ell() * sin()), ell(), "{l cos, l sin} = l"),
        Relation("ls-derivation", ell() * sin(), -HALF * pb(ell(2), cos()), "l sin = -1/2 {l^2, cos}"),
        Relation("lc-derivation", ell() * cos(), HALF * pb(ell(2), sin()), "l cos = 1/2 {l^2, sin}"),
        Relation("l2s-derivation", ell(2) * sin(), HALF * pb(ell() * cos(), ell(2)), "l^2 sin = 1/2 {l cos, l^2}"),
        Relation("l2c-derivation", ell(2) * cos(), -HALF * pb(ell() * sin(), ell(2)), "l^2 cos = -1/2 {l sin, l^2}"),
        Relation(
            "nogo-main",
            2 * pb(pb(ell(2) * sin(), ell(2) * cos()), cos()),
            ell(2).scale(12) * sin(),
            "2{{l^2 sin, l^2 cos}, cos} = 12 l^2 sin",
        ),
        Relation(
            "cubic-consistency",
            A3,
            HALF * pb(A2 * cos(), A2 * sin()) - ell().scale(ALPHA * ALPHA * 2),
            "l^3 + 3 alpha l^2 = 1/2 {(l^2 + 2 alpha l) cos, (l^2 + 2 alpha l) sin} - 2 alpha^2 l",
        ),
        Relation("l2s'-derivation", A2 * sin(), -THIRD * pb(A3, cos()), "(l^2 + 2 alpha l) sin = -1/3 {l^3 + 3 alpha l^2, cos}"),
        Relation("l2c'-derivation", A2 * cos(), THIRD * pb(A3, sin()), "(l^2 + 2 alpha l) cos = 1/3 {l^3 + 3 alpha l^2, sin}"),
        Relation("l4s-derivation", A4 * sin(), THIRD * pb(A2 * cos(), A3), "A4 sin = 1/3 {(l^2 + 2 alpha l) cos, l^3 + 3 alpha l^2}"),
        Relation("l4c-derivation", A4 * cos(), -THIRD * pb(A2 * sin(), A3), "A4 cos = -1/3 {(l^2 + 2 alpha l) sin, l^3 + 3 alpha l^2}"),
        Relation(
            "nogo-valpha",
            pb(pb(A2 * cos(), A4 * sin()), cos()) + pb(pb(A4 * cos(), A2 * sin()), cos()),
            -30 * (A4 * sin()) - (ALPHA * ALPHA * 24) * (A2 * sin()),
            "{{A2 cos, A4 sin}, cos} + {{A4 cos, A2 sin}, cos} = -30 A4 sin - 24 alpha^2 A2 sin",
        ),
        Relation("cos-squared", cos() * cos(), HALF * pb(pb(ell(2), sin()), sin()), "cos^2 = 1/2 {{l^2, sin}, sin}"),
        Relation("sin-squared", sin() * sin(), HALF * pb(pb(ell(2), cos()), cos()), "sin^2 = 1/2 {{l^2, cos}, cos}"),
    ]
    return {relation.name: relation for relation in catalogue}


RELATIONS: Dict[str, Relation] = _relations()


def walpha_relation(n: int) -> Relation:
    """{e^3_2n + 3 alpha e^2_2n - 2 alpha^3 e^0_2n, e^0_1} = 3i (e^2_{2n+1} + 2 alpha e^1_{2n+1})."""
    source = ClassicalElement({(3, 2 * n): 1, (2, 2 * n): ALPHA * 3, (0, 2 * n): -(ALPHA ** 3) * 2})
    return Relation(
        f"walpha-{n}",
        pb(source, exp_i(1)),
        walpha_generator(2 * n + 1).scale(I_UNIT * 3),
        f"{{e^3_{2 * n} + 3 alpha e^2_{2 * n} - 2 alpha^3 e^0_{2 * n}, e^0_1}} = 3i(e^2_{2 * n + 1} + 2 alpha e^1_{2 * n + 1})",
    )


# operator identity

def iden_operator(nu=None) -> OperatorElement:
    """[[Q(l)^2, Q(sin)], Q(sin)] + [[Q(l)^2, Q(cos)], Q(cos)] in the type-i scheme."""
    scheme = build_scheme(SchemeKind.TYPE_I, {"nu": nu})
    L, S, C = scheme.quantize(ell()), scheme.quantize(sin()), scheme.quantize(cos())
    square = L * L
    return op_commutator(op_commutator(square, S), S) + op_commutator(op_commutator(square, C), C)


# schemes used by the no-go computations

def _type_i(bindings: Optional[Mapping[str, object]], forced: Mapping[str, object], name: str) -> QuantScheme:
    return build_scheme(SchemeKind.TYPE_I, {**dict(bindings or {}), **forced}, name=name)


def main_scheme(bindings: Optional[Mapping[str, object]] = None) -> QuantScheme:
    """type-i with rules l2 (b = 0), ls, lc, l2s, l2c; nu and c formal unless bound."""
    scheme = _type_i(bindings, {"b": 0}, "type-i-main")
    return extend_with(scheme, ("l2", "ls", "lc", "l2s", "l2c"))


def valpha_scheme(bindings: Optional[Mapping[str, object]] = None) -> QuantScheme:
    """type-i with the alpha-family rules, b' = 1/2 and c' = alpha/2."""
    alpha = (bindings or {}).get("alpha")
    alpha_value = ALPHA if alpha is None else Scalar.coerce(alpha)
    scheme = _type_i(bindings, {"bp": HALF, "cp": alpha_value / 2}, "type-i-valpha")
    return extend_with(scheme, ("cubic", "l2s'", "l2c'", "l4s", "l4c"))


@dataclass(frozen=True)
class NoGoResult:
    relation: Relation
    lhs: OperatorElement
    rhs: OperatorElement
    residual: OperatorElement
    lhs_display: Dict[Tuple[str, int], Scalar]
    rhs_display: Dict[Tuple[str, int], Scalar]
    residual_display: Dict[Tuple[str, int], Scalar]
    solution: Solution


def _nogo(scheme: QuantScheme, relation: Relation, unknowns) -> NoGoResult:
    nu = scheme.param("nu")
    lhs = relation.lhs.quantized(scheme)
    rhs = relation.rhs.quantized(scheme)
    residual = lhs - rhs
    solution = solve_linear(extract_constraints(residual), unknowns)
    logger.info(f"{relation.name}: {solution.to_text()}")
    return NoGoResult(
        relation=relation,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        lhs_display=generator_display(lhs, nu),
        rhs_display=generator_display(rhs, nu),
        residual_display=generator_display(residual, nu),
        solution=solution,
    )


def nogo_main(scheme: Optional[QuantScheme] = None) -> NoGoResult:
    """LHS minus RHS of 2{{l^2 sin, l^2 cos}, cos} = 12 l^2 sin; expected 2 Q(sin)."""
    return _nogo(scheme or main_scheme(), RELATIONS["nogo-main"], ("c",))


def nogo_valpha(scheme: Optional[QuantScheme] = None) -> NoGoResult:
    return _nogo(scheme or valpha_scheme(), RELATIONS["nogo-valpha"], ())


# parameter determinations

def _determine(relation: str, rules, unknowns, bindings) -> Tuple[OperatorElement, Solution]:
    free = {name: None for name in unknowns}
    scheme = extend_with(_type_i(bindings, free, "type-i"), rules)
    residual = RELATIONS[relation].residual(scheme)
    return residual, solve_linear(extract_constraints(residual), unknowns)


def b_zero(bindings: Optional[Mapping[str, object]] = None) -> Tuple[OperatorElement, Solution]:
    """{l cos, l sin} = l under rules l2, ls, lc forces b = 0."""
    return _determine("lcos-lsin", ("l2", "ls", "lc"), ("b",), bindings)


def bprime_cprime(bindings: Optional[Mapping[str, object]] = None) -> Tuple[OperatorElement, Solution]:
    return _determine("cubic-consistency", ("cubic", "l2s'", "l2c'"), ("bp", "cp"), bindings)


def l2_underdetermined(bindings: Optional[Mapping[str, object]] = None) -> Tuple[OperatorElement, Solution]:
    return _determine("iden", ("l2",), ("b", "c"), bindings)


@dataclass(frozen=True)
class AsideResult:
    sine: OperatorElement
    cosine: OperatorElement

    @property
    def degree_zero_only(self) -> bool:
        return all(k == 0 for operator in (self.sine, self.cosine) for (_, _, k) in operator.words())


def aside_discrepancy(bindings: Optional[Mapping[str, object]] = None) -> AsideResult:
    """(l2s) + 2 alpha (ls) - (l2s') and its cosine twin, with b = 0 and b' = 1/2."""
    scheme = _type_i(bindings, {"b": 0, "bp": HALF}, "type-i")
    alpha = scheme.param("alpha")
    sine = rule_value(scheme, "l2s") + rule_value(scheme, "ls").scale(alpha * 2) - rule_value(scheme, "l2s'")
    cosine = rule_value(scheme, "l2c") + rule_value(scheme, "lc").scale(alpha * 2) - rule_value(scheme, "l2c'")
    return AsideResult(sine, cosine)


# trivial representations

@dataclass(frozen=True)
class TrivialReport:
    kind: str
    derived: Dict[str, Scalar]
    solution: Solution
    vanishing: Tuple[int, ...] = ()


def _as_scalar(operator: OperatorElement) -> Scalar:
    extra = [word for word in operator.words() if word != (0, 0, 0)]
    if extra:
        raise ValueError(f"{operator.to_text()} is not a multiple of the identity")
    return operator.coefficient((0, 0, 0))


def trivial_rep_checks(kind: str, bound: int = 4, bindings: Optional[Mapping[str, object]] = None) -> TrivialReport:
    bindings = {**dict(bindings or {}), "mu": None}
    if kind == "full_P":
        scheme = build_scheme(SchemeKind.TYPE_II, bindings)
        cos_squared = RELATIONS["cos-squared"].rhs.quantized(scheme)
        sin_squared = RELATIONS["sin-squared"].rhs.quantized(scheme)
        # 1 = cos^2 + sin^2 classically
        residual = scheme.quantize(1) - cos_squared - sin_squared
        solution = solve_linear(extract_constraints(residual), ("mu",))
        derived = {"Q(cos^2)": _as_scalar(cos_squared), "Q(sin^2)": _as_scalar(sin_squared)}
        return TrivialReport(kind, derived, solution)

    if kind == "valpha":
        scheme = build_scheme(SchemeKind.TYPE_II, bindings)
        residual = RELATIONS["newiden"].residual(scheme)
        solution = solve_linear(extract_constraints(residual), ("mu",))
        bound_scheme = build_scheme(SchemeKind.TYPE_II, {**bindings, "mu": solution.assignment.get("mu")})
        b, c = Scalar.parameter("b"), Scalar.parameter("c")
        derived = {
            "Q(l)": _as_scalar(bound_scheme.quantize(ell())),
            "Q(b l + c)": _as_scalar(bound_scheme.quantize(ell().scale(b) + ClassicalElement.constant(c))),
        }
        vanishing = []
        for n in range(-bound, bound + 1):
            relation = walpha_relation(n)
            if not relation.holds_classically():
                continue
            # Q(e^2_{2n+1} + 2 alpha e^1_{2n+1}) = Q({X, e^0_1}) / 3i
            value = relation.lhs.quantized(bound_scheme).scale(ONE / (I_UNIT * 3))
            if value.is_zero():
                vanishing.append(n)
        return TrivialReport(kind, derived, solution, tuple(vanishing))

    raise ValueError(f"unknown trivial representation kind '{kind}'")


# position representations

@dataclass
class UniquenessReport:
    bound: int
    verified: Dict[str, int] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def record(self, equation: str, holds: bool, detail: str) -> None:
        self.verified[equation] = self.verified.get(equation, 0) + (1 if holds else 0)
        if not holds:
            self.failures.append(f"{equation}: {detail}")

    @property
    def ok(self) -> bool:
        return not self.failures


def uniqueness_constraints(scheme: Optional[QuantScheme] = None, bound: int = 6) -> UniquenessReport:
    """Matrix elements D^N_n = <n+N|Q(e^0_N)|n> and d^N_n = <n+N|Q(e^1_N)|n> against every constraint."""
    scheme = scheme or build_scheme(SchemeKind.POS_REP)
    nu, eta = scheme.param("nu"), scheme.param("eta")
    report = UniquenessReport(bound)
    window = range(-bound, bound + 1)
    shifts: Dict[int, OperatorElement] = {}
    movers: Dict[int, OperatorElement] = {}

    def shift(N: int) -> OperatorElement:
        if N not in shifts:
            shifts[N] = scheme.quantize(exp_i(N))
        return shifts[N]

    def mover(N: int) -> OperatorElement:
        if N not in movers:
            movers[N] = scheme.quantize(ClassicalElement.monomial(1, N))
        return movers[N]

    def D(N: int, n: int) -> Scalar:
        return matrix_element(shift(N), n + N, n)

    def d(N: int, n: int) -> Scalar:
        return matrix_element(mover(N), n + N, n)

    for N in window:
        for n in window:
            reached = {m for m, _ in apply_ket(shift(N), n).terms()} | {m for m, _ in apply_ket(mover(N), n).terms()}
            report.record("D", reached <= {n + N}, f"N={N} n={n}")
            report.record("qD", D(N, n) == D(N, 0), f"N={N} n={n}")
            report.record("D=1", D(N, n) == 1, f"N={N} n={n}")
            report.record("dnD", d(N, n) == d(N, 0) + D(N, 0) * n, f"N={N} n={n}")
            expected = KetCombination({n + N: Scalar.constant(n) + eta * Gaussian(0, N) + Fraction(N, 2) + nu})
            report.record("action", apply_ket(mover(N), n) == expected, f"N={N} n={n}")
            for M in window:
                holds = (d(N, n + M) - d(N, n)) * D(M, 0) == D(N + M, 0) * M
                report.record("MN", holds, f"N={N} M={M} n={n}")

        for M in window:
            holds = d(M, 0) * M - d(N, 0) * N == d(M + N, 0) * (M - N)
            report.record("recur1", holds, f"N={N} M={M}")
        report.record("plus", d(N, 0) + d(-N, 0) == nu * 2, f"N={N}")
        report.record("recur2", d(N, 0) == d(1, 0) * N + nu * (1 - N), f"N={N}")
        report.record("minus", d(N, 0).conjugate() - d(-N, 0) == N, f"N={N}")
        report.record("re", d(N, 0).real_part() == nu + Fraction(N, 2), f"N={N}")
        report.record("im", d(N, 0).imag_part() == eta * N, f"N={N}")
    logger.info(f"uniqueness constraints: {sum(report.verified.values())} equations hold, {len(report.failures)} fail")
    return report


def posrep_homomorphism(bound: int = 8, scheme: Optional[QuantScheme] = None) -> List[Tuple[int, int, OperatorElement]]:
    """Nonzero bracket residuals over pairs (e^1_N, e^1_M), |N|, |M| <= bound."""
    scheme = scheme or build_scheme(SchemeKind.POS_REP)
    failures = []
    for N in range(-bound, bound + 1):
        for M in range(-bound, bound + 1):
            residual = bracket_residual(scheme, ClassicalElement.monomial(1, N), ClassicalElement.monomial(1, M))
            if not residual.is_zero():
                failures.append((N, M, residual))
    return failures


# recursion for the diagonal part of Q(l^2) - Q(l)^2

def recursion_operator(bindings: Optional[Mapping[str, object]] = None) -> AnyOperator:
    """K = [[Xi, Q(sin)], Q(sin)] + [[Xi, Q(cos)], Q(cos)] in the type-i scheme."""
    scheme = build_scheme(SchemeKind.TYPE_I, bindings)
    S, C = scheme.quantize(sin()), scheme.quantize(cos())
    xi = OperatorElement.diagonal()
    return op_commutator(op_commutator(xi, S), S) + op_commutator(op_commutator(xi, C), C)


def recursion_combination(n: int) -> Scalar:
    """2 xi[n] - xi[n+1] - xi[n-1]"""
    return Scalar.xi(n) * 2 - Scalar.xi(n + 1) - Scalar.xi(n - 1)


def recursion_elements(bound: int = 5, bindings: Optional[Mapping[str, object]] = None) -> Dict[int, Scalar]:
    K = recursion_operator(bindings)
    return {n: matrix_element(K, n, n) for n in range(-bound, bound + 1)}


def recursion_multiple(element: Scalar, n: int) -> Optional[Gaussian]:
    """kappa with element = kappa (2 xi[n] - xi[n+1] - xi[n-1]), or None."""
    kappa = element.coefficient(((xi_name(n), 1),)) / 2
    if recursion_combination(n) * kappa == element:
        return kappa
    return None
