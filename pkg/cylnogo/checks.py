"""
cylnogo/checks.py

Named verification checks. Each check replays one identity, determination or
contradiction with the canonical inputs from the manifest and reports the
status it reached; a run succeeds when every selected check reaches its
expected status. No-go checks expect inconsistent-as-expected, so an engine
change that makes an obstruction disappear shows up as a failure.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import anyio
import anyio.to_thread

from cylnogo.classical import ClassicalElement, ell, exp_i, sin, cos
from cylnogo.config import Manifest, load_manifest, parse_bindings
from cylnogo.constraints import SolveStatus
from cylnogo.errors import UnknownCheckError
from cylnogo.obstructions import (
    ALPHA,
    RELATIONS,
    aside_discrepancy,
    b_zero,
    bprime_cprime,
    iden_operator,
    l2_underdetermined,
    main_scheme,
    nogo_main,
    nogo_valpha,
    posrep_homomorphism,
    recursion_elements,
    recursion_multiple,
    trivial_rep_checks,
    uniqueness_constraints,
    valpha_scheme,
)
from cylnogo.operators import KetCombination, OperatorElement, word_text
from cylnogo.parsing import parse, parse_scalar
from cylnogo.quantization import SchemeKind, build_scheme, display_text
from cylnogo.reporting import CheckResult, Status
from cylnogo.scalars import I_UNIT, ZERO, Scalar
from cylnogo.subalgebra import (
    affine_box_generators,
    basic_generators,
    closure,
    irreducibility_probe,
    leading_term_scan,
    member,
    walpha_generators,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckContext:
    bindings: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Outcome:
    status: Status
    witness: str


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    expected: Status
    run: Callable[[CheckContext], Outcome]


def _verdict(holds: bool, witness: str, success: Status = Status.PASS) -> Outcome:
    return Outcome(success if holds else Status.FAIL, witness)


def _words(operator: OperatorElement) -> str:
    return ", ".join(word_text(word) for word in operator.words()) or "none"


# identities

def check_iden(ctx: CheckContext) -> Outcome:
    relation = RELATIONS["iden"]
    classical = relation.lhs.classical()
    operator = iden_operator(ctx.bindings.get("nu"))
    expected = OperatorElement.scalar(-2)
    holds = classical == ClassicalElement.constant(2) and operator == expected
    residual = operator - expected
    return _verdict(holds, f"residual = {residual.to_text()}; classical side = {classical.to_text()}; operator side = {operator.to_text()}")


def check_newiden(ctx: CheckContext) -> Outcome:
    relation = RELATIONS["newiden"]
    classical = relation.lhs.classical()
    expected = ell().scale(6) + ClassicalElement.constant(ALPHA * 6)
    return _verdict(classical == expected, f"classical side = {classical.to_text()}")


# parameter determinations

def check_vn_l2_underdetermined(ctx: CheckContext) -> Outcome:
    residual, solution = l2_underdetermined(ctx.bindings)
    holds = solution.status is SolveStatus.UNDERDETERMINED and set(solution.free) == {"b", "c"}
    return _verdict(holds, f"residual = {residual.to_text()}; {solution.to_text()}")


def check_b_zero(ctx: CheckContext) -> Outcome:
    residual, solution = b_zero(ctx.bindings)
    holds = solution.status is SolveStatus.SOLVED and solution.assignment.get("b") == 0
    return _verdict(holds, f"residual = {residual.to_text()}; {solution.to_text()}")


def check_bprime_cprime(ctx: CheckContext) -> Outcome:
    residual, solution = bprime_cprime(ctx.bindings)
    alpha = ctx.bindings.get("alpha")
    alpha = ALPHA if alpha is None else Scalar.coerce(alpha)
    holds = (
        solution.status is SolveStatus.SOLVED
        and solution.assignment.get("bp") == Fraction(1, 2)
        and solution.assignment.get("cp") == alpha / 2
    )
    return _verdict(holds, f"{solution.to_text()}; residual words {_words(residual)}")


def check_aside_discrepancy(ctx: CheckContext) -> Outcome:
    aside = aside_discrepancy(ctx.bindings)
    scheme = build_scheme(SchemeKind.TYPE_I, ctx.bindings)
    quarter = Fraction(-1, 4)
    holds = (
        not aside.sine.is_zero()
        and not aside.cosine.is_zero()
        and aside.degree_zero_only
        and aside.sine == scheme.quantize(sin()).scale(quarter)
        and aside.cosine == scheme.quantize(cos()).scale(quarter)
    )
    return _verdict(holds, f"sine difference = {aside.sine.to_text()}; cosine difference = {aside.cosine.to_text()}")


# no-go results

def check_nogo_main(ctx: CheckContext) -> Outcome:
    scheme = main_scheme(ctx.bindings)
    result = nogo_main(scheme)
    L, S, C = (scheme.quantize(f) for f in (ell(), sin(), cos()))
    expected_lhs = (S * L * L).scale(12) - (C * L).scale(I_UNIT * 12) + S.scale(5)
    expected_rhs = (S * L * L).scale(12) - (C * L).scale(I_UNIT * 12) + S.scale(3)
    holds = (
        result.solution.status is SolveStatus.INCONSISTENT
        and result.lhs == expected_lhs
        and result.rhs == expected_rhs
        and result.residual == S.scale(2)
    )
    witness = (
        f"residual = {display_text(result.residual_display)}; "
        f"lhs = {display_text(result.lhs_display)}; rhs = {display_text(result.rhs_display)}; "
        f"{result.solution.to_text()}"
    )
    return _verdict(holds, witness, Status.INCONSISTENT_AS_EXPECTED)


def _valpha_displays(alpha: Scalar) -> Tuple[Dict[Tuple[str, int], Scalar], Dict[Tuple[str, int], Scalar]]:
    """Expected degree-4 displays of both sides, keyed like generator_display."""
    alpha2, alpha3 = alpha * alpha, alpha * alpha * alpha
    shared = {
        ("sin", 4): Scalar.constant(-30),
        ("cos", 3): I_UNIT * 60,
        ("sin", 3): alpha * -120,
        ("cos", 2): I_UNIT * alpha * 180,
    }
    lhs = {
        **shared,
        ("sin", 2): -(alpha2 * 144 + 84),
        ("cos", 1): I_UNIT * (alpha2 * 144 + 54),
        ("sin", 1): -(alpha * 168 + alpha3 * 48),
        ("cos", 0): I_UNIT * (alpha * 54 + alpha3 * 24),
        ("sin", 0): -(alpha2 * 66 + Fraction(31, 2)),
    }
    rhs = {
        **shared,
        ("sin", 2): -(alpha2 * 144 + 60),
        ("cos", 1): I_UNIT * (alpha2 * 144 + 30),
        ("sin", 1): -(alpha * 120 + alpha3 * 48),
        ("cos", 0): I_UNIT * (alpha * 30 + alpha3 * 24),
        ("sin", 0): -(alpha2 * 42 + Fraction(15, 2)),
    }
    return lhs, rhs


def _difference(lhs, rhs) -> Dict[Tuple[str, int], Scalar]:
    keys = set(lhs) | set(rhs)
    difference = {key: lhs.get(key, ZERO) - rhs.get(key, ZERO) for key in keys}
    return {key: value for key, value in difference.items() if not value.is_zero()}


def check_nogo_valpha(ctx: CheckContext) -> Outcome:
    scheme = valpha_scheme(ctx.bindings)
    result = nogo_valpha(scheme)
    lhs, rhs = _valpha_displays(scheme.param("alpha"))
    holds = (
        result.solution.status is SolveStatus.INCONSISTENT
        and result.lhs_display == lhs
        and result.rhs_display == rhs
        and result.residual_display == _difference(lhs, rhs)
    )
    witness = f"residual = {display_text(result.residual_display)}; {result.solution.to_text()}"
    return _verdict(holds, witness, Status.INCONSISTENT_AS_EXPECTED)


# trivial representations

def check_trivial_p(ctx: CheckContext) -> Outcome:
    report = trivial_rep_checks("full_P", bindings=ctx.bindings)
    certificate = report.solution.certificate
    holds = (
        report.solution.status is SolveStatus.INCONSISTENT
        and certificate is not None
        and certificate.equation == 1
    )
    derived = ", ".join(f"{name} = {value.to_text()}" for name, value in report.derived.items())
    return _verdict(holds, f"{derived}; {report.solution.to_text()}", Status.INCONSISTENT_AS_EXPECTED)


def check_trivial_valpha(ctx: CheckContext) -> Outcome:
    bound = int(ctx.options.get("bound", 4))
    report = trivial_rep_checks("valpha", bound=bound, bindings=ctx.bindings)
    alpha = ctx.bindings.get("alpha")
    alpha = ALPHA if alpha is None else Scalar.coerce(alpha)
    b, c = Scalar.parameter("b"), Scalar.parameter("c")
    holds = (
        report.solution.status is SolveStatus.SOLVED
        and report.derived["Q(l)"] == -alpha
        and report.derived["Q(b l + c)"] == c - alpha * b
        and report.vanishing == tuple(range(-bound, bound + 1))
    )
    derived = ", ".join(f"{name} = {value.to_text()}" for name, value in report.derived.items())
    return _verdict(holds, f"{derived}; generators vanish for N in {list(report.vanishing)}")


# position representations

def check_posrep_hom(ctx: CheckContext) -> Outcome:
    bound = int(ctx.options.get("bound", 8))
    scheme = build_scheme(SchemeKind.POS_REP, ctx.bindings)
    failures = posrep_homomorphism(bound, scheme)
    pairs = (2 * bound + 1) ** 2
    if failures:
        N, M, residual = failures[0]
        return Outcome(Status.FAIL, f"{len(failures)} of {pairs} pairs fail; first (N={N}, M={M}): {residual.to_text()} at {_words(residual)}")
    return Outcome(Status.PASS, f"residual 0 over {pairs} monomial pairs")


def check_uniqueness_constraints(ctx: CheckContext) -> Outcome:
    bound = int(ctx.options.get("bound", 6))
    scheme = build_scheme(SchemeKind.POS_REP, ctx.bindings)
    report = uniqueness_constraints(scheme, bound)
    counts = ", ".join(f"{name}: {count}" for name, count in sorted(report.verified.items()))
    if not report.ok:
        return Outcome(Status.FAIL, f"{len(report.failures)} failures, first {report.failures[0]}")
    return Outcome(Status.PASS, f"verified {counts}")


# recursion

def _brute_force_diagonal(n: int, S: OperatorElement, C: OperatorElement) -> Scalar:
    """<n|[[Xi,A],A]|n> summed over A = S, C, expanding Xi A A - 2 A Xi A + A A Xi on kets."""
    xi = OperatorElement.diagonal()
    total = Scalar()
    for A in (S, C):
        for sign, factors in ((1, (xi, A, A)), (-2, (A, xi, A)), (1, (A, A, xi))):
            state = KetCombination.basis(n)
            for factor in reversed(factors):
                state = factor.apply(state)
            total = total + state.coefficient(n) * sign
    return total


def check_recursion(ctx: CheckContext) -> Outcome:
    bound = int(ctx.options.get("bound", 5))
    elements = recursion_elements(bound, ctx.bindings)
    scheme = build_scheme(SchemeKind.TYPE_I, ctx.bindings)
    S, C = scheme.quantize(sin()), scheme.quantize(cos())
    multiples = set()
    for n, element in elements.items():
        kappa = recursion_multiple(element, n)
        if kappa is None or not kappa or element != _brute_force_diagonal(n, S, C):
            return Outcome(Status.FAIL, f"<{n}|K|{n}> = {element.to_text()}")
        multiples.add(kappa)
    holds = len(multiples) == 1
    kappa = next(iter(multiples))
    return _verdict(holds, f"<n|K|n> = {kappa.to_text()}*(2*xi[n] - xi[n+1] - xi[n-1]) for |n| <= {bound}")


# subalgebra lab

def _cutoff(ctx: CheckContext, default: Tuple[int, int]) -> Tuple[int, int]:
    value = ctx.options.get("cutoff", default)
    return int(value[0]), int(value[1])


def check_irred(ctx: CheckContext) -> Outcome:
    max_degree = int(ctx.options.get("max_degree", 3))
    cutoff = int(ctx.options.get("cutoff", 6))
    incomplete = []
    for r in range(max_degree + 1):
        report = irreducibility_probe(r, 1, cutoff)
        if not report.complete:
            incomplete.append(f"r={r} misses {list(report.missing)}")
    zero_seed = irreducibility_probe(0, 0, cutoff)
    holds = not incomplete and zero_seed.fixed_seed
    if incomplete:
        return Outcome(Status.FAIL, "; ".join(incomplete))
    return _verdict(holds, f"all e^r_m with r <= {max_degree}, |m| <= {cutoff} reached; e^0_0 is a fixed seed")


def check_p1_maximal(ctx: CheckContext) -> Outcome:
    cutoff = _cutoff(ctx, (3, 4))
    affine = closure(basic_generators(), cutoff)
    if any(vector.degree > 1 for vector in affine.vectors):
        return Outcome(Status.FAIL, f"closure of B reaches degree 2: pivots {affine.pivots}")
    witness = [f"B closure dimension {affine.dimension}"]
    with_square = closure(basic_generators() + [ell(2)], cutoff)
    witness.append(f"B + l^2 dimension {with_square.dimension} of {with_square.box_dimension}")
    holds = with_square.is_full_box()
    for text in ctx.options.get("adjoined", ["l^2", "l^2*E[1]", "l^3*E[2]"]):
        basis = closure(affine_box_generators(cutoff[1]) + [parse(text)], cutoff)
        witness.append(f"P1 + {text} dimension {basis.dimension}")
        holds = holds and basis.is_full_box()
    return _verdict(holds, "; ".join(witness))


def _alphas(ctx: CheckContext) -> List[Scalar]:
    return [parse_scalar(str(text)) for text in ctx.options.get("alphas", ["1/3", "1", "-2"])]


@lru_cache(maxsize=None)
def _walpha_closure(alpha: Scalar, cutoff: Tuple[int, int]):
    return closure(walpha_generators(cutoff[1], alpha), cutoff)


def check_walpha_structure(ctx: CheckContext) -> Outcome:
    cutoff = _cutoff(ctx, (3, 5))
    witness = []
    for alpha in _alphas(ctx):
        basis = _walpha_closure(alpha, cutoff)
        missing = [f"e^1_{2 * N} + alpha e^0_{2 * N}" for N in range(-2, 3)
                   if not member(ClassicalElement({(1, 2 * N): 1, (0, 2 * N): alpha}), basis).certified]
        absent = [(entry.degree, entry.harmonic) for entry in leading_term_scan(basis, alpha) if not entry.found]
        if missing or absent:
            return Outcome(Status.FAIL, f"alpha = {alpha.to_text()}: missing {missing}, no leading pair for {absent}")
        witness.append(f"alpha = {alpha.to_text()}: dimension {basis.dimension}")
    return Outcome(Status.PASS, "; ".join(witness))


def check_bootstrap(ctx: CheckContext) -> Outcome:
    cutoff = _cutoff(ctx, (3, 5))
    witness = []
    for alpha in _alphas(ctx):
        basis = _walpha_closure(alpha, cutoff)
        harmonics = [2 * N for N in range(-(cutoff[1] // 2), cutoff[1] // 2 + 1) if N]
        found = [m for m in harmonics if member(exp_i(m), basis).certified]
        if found:
            return Outcome(Status.FAIL, f"alpha = {alpha.to_text()}: e^0_m in the closure for m in {found}")
        witness.append(f"alpha = {alpha.to_text()}: e^0_m absent for m in {harmonics}")
    return Outcome(Status.PASS, "; ".join(witness))


REGISTRY: Dict[str, Check] = {
    check.name: check
    for check in (
        Check("iden", RELATIONS["iden"].statement, Status.PASS, check_iden),
        Check("vn-l2-underdetermined", "Q(l^2) = Q(l)^2 + bQ(l) + cI leaves b and c free", Status.PASS, check_vn_l2_underdetermined),
        Check("b-zero", RELATIONS["lcos-lsin"].statement + " forces b = 0", Status.PASS, check_b_zero),
        Check("nogo-main", RELATIONS["nogo-main"].statement + " fails after quantization", Status.INCONSISTENT_AS_EXPECTED, check_nogo_main),
        Check("trivial-p", "a one-dimensional quantization of all polynomials gives 1 = 0", Status.INCONSISTENT_AS_EXPECTED, check_trivial_p),
        Check("newiden", RELATIONS["newiden"].statement, Status.PASS, check_newiden),
        Check("bprime-cprime", RELATIONS["cubic-consistency"].statement + " forces b' = 1/2, c' = alpha/2", Status.PASS, check_bprime_cprime),
        Check("aside-discrepancy", "(l2s) + 2 alpha (ls) and (l2s') differ only in D-degree zero", Status.PASS, check_aside_discrepancy),
        Check("nogo-valpha", RELATIONS["nogo-valpha"].statement + " fails after quantization", Status.INCONSISTENT_AS_EXPECTED, check_nogo_valpha),
        Check("trivial-valpha", "Q(b l + c) = (c - alpha b) I on the alpha family", Status.PASS, check_trivial_valpha),
        Check("posrep-hom", "Q(e^1_N) = E^N (D + iN eta + N/2 + nu) respects brackets on P1", Status.PASS, check_posrep_hom),
        Check("uniqueness-constraints", "matrix elements of the position representations satisfy the uniqueness constraints", Status.PASS, check_uniqueness_constraints),
        Check("recursion", "<n|K|n> is a multiple of 2 xi[n] - xi[n+1] - xi[n-1]", Status.PASS, check_recursion),
        Check("irred", "each P_r is irreducible under the ladders", Status.PASS, check_irred),
        Check("p1-maximal", "adjoining any degree-2 element to P1 regenerates the box", Status.PASS, check_p1_maximal),
        Check("walpha-structure", "W_alpha contains e^r_N + r alpha e^{r-1}_N + lower terms", Status.PASS, check_walpha_structure),
        Check("bootstrap", "e^0_2N is never in W_alpha for N != 0", Status.PASS, check_bootstrap),
    )
}


def select(names: Optional[Iterable[str]] = None) -> List[Check]:
    if not names:
        return [REGISTRY[name] for name in sorted(REGISTRY)]
    selected = []
    for name in names:
        if name not in REGISTRY:
            raise UnknownCheckError(f"unknown check '{name}'; known checks: {', '.join(sorted(REGISTRY))}")
        selected.append(REGISTRY[name])
    return selected


def context_for(check: Check, manifest: Manifest) -> CheckContext:
    defaults = manifest.defaults(check.name)
    return CheckContext(parse_bindings(defaults.bindings), dict(defaults.options))


def run_check(check: Check, ctx: CheckContext) -> CheckResult:
    logger.info(f"Running check {check.name}")
    start = time.perf_counter()
    try:
        outcome = check.run(ctx)
    except Exception as e:
        logger.error(f"Check {check.name} raised: {str(e)}")
        outcome = Outcome(Status.FAIL, f"{type(e).__name__}: {e}")
    elapsed = (time.perf_counter() - start) * 1000
    logger.info(f"Check {check.name}: {outcome.status.value} in {elapsed:.1f} ms")
    return CheckResult(name=check.name, status=outcome.status, witness=outcome.witness, anchor=check.anchor, elapsed_ms=round(elapsed, 3))


def succeeded(result: CheckResult) -> bool:
    return result.status == REGISTRY[result.name].expected


async def run_checks_async(
    names: Optional[Iterable[str]] = None,
    jobs: int = 1,
    manifest: Optional[Manifest] = None,
    on_result: Optional[Callable[[CheckResult], None]] = None,
) -> List[CheckResult]:
    checks = select(names)
    manifest = manifest or load_manifest()
    results: List[CheckResult] = []
    limiter = anyio.CapacityLimiter(max(1, jobs))

    async def worker(check: Check) -> None:
        ctx = context_for(check, manifest)
        result = await anyio.to_thread.run_sync(run_check, check, ctx, limiter=limiter)
        results.append(result)
        if on_result is not None:
            on_result(result)

    async with anyio.create_task_group() as tg:
        for check in checks:
            tg.start_soon(worker, check)
    return sorted(results, key=lambda result: result.name)


def run_checks(
    names: Optional[Iterable[str]] = None,
    jobs: int = 1,
    manifest: Optional[Manifest] = None,
    on_result: Optional[Callable[[CheckResult], None]] = None,
) -> List[CheckResult]:
    """Run the selected checks (all by default); jobs = 1 runs them one after another."""
    if jobs <= 1:
        checks = select(names)
        manifest = manifest or load_manifest()
        results = []
        for check in checks:
            result = run_check(check, context_for(check, manifest))
            results.append(result)
            if on_result is not None:
                on_result(result)
        return sorted(results, key=lambda result: result.name)
    return anyio.run(run_checks_async, names, jobs, manifest, on_result)
