from fractions import Fraction

import pytest

from cylnogo.classical import cos, ell, sin
from cylnogo.constraints import SolveStatus
from cylnogo.obstructions import (
    ALPHA,
    aside_discrepancy,
    b_zero,
    bprime_cprime,
    iden_operator,
    l2_underdetermined,
    main_scheme,
    nogo_main,
    nogo_valpha,
    posrep_homomorphism,
    recursion_combination,
    recursion_elements,
    recursion_multiple,
    trivial_rep_checks,
    uniqueness_constraints,
    walpha_generator,
)
from cylnogo.operators import OperatorElement
from cylnogo.quantization import build_scheme
from cylnogo.scalars import Gaussian, Scalar

S = build_scheme("type-i").quantize(sin())
C = build_scheme("type-i").quantize(cos())
b, c = Scalar.parameter("b"), Scalar.parameter("c")


@pytest.mark.parametrize("nu", [None, Fraction(1, 3), -2])
def test_operator_identity_is_minus_two(nu):
    assert iden_operator(nu) == OperatorElement.scalar(-2)


def test_l2_rule_leaves_b_and_c_free():
    residual, solution = l2_underdetermined()
    assert residual.is_zero()
    assert solution.status is SolveStatus.UNDERDETERMINED
    assert solution.free == ("b", "c")


def test_lcos_lsin_forces_b_zero():
    residual, solution = b_zero()
    assert not residual.is_zero()
    assert solution.status is SolveStatus.SOLVED
    assert solution.assignment == {"b": Scalar.constant(0)}


def test_cubic_consistency_forces_bprime_and_cprime():
    _, solution = bprime_cprime()
    assert solution.status is SolveStatus.SOLVED
    assert solution.assignment["bp"] == Fraction(1, 2)
    assert solution.assignment["cp"] == ALPHA / 2


def test_aside_discrepancy_is_a_degree_zero_multiple_of_the_generators():
    aside = aside_discrepancy()
    assert aside.sine == S.scale(Fraction(-1, 4))
    assert aside.cosine == C.scale(Fraction(-1, 4))
    assert aside.degree_zero_only


def test_nogo_main_residual_is_two_sine():
    result = nogo_main()
    assert result.lhs_display == {
        ("sin", 2): Scalar.constant(12),
        ("cos", 1): Scalar.constant(Gaussian(0, -12)),
        ("sin", 0): Scalar.constant(5),
    }
    assert result.rhs_display == {
        ("sin", 2): Scalar.constant(12),
        ("cos", 1): Scalar.constant(Gaussian(0, -12)),
        ("sin", 0): Scalar.constant(3),
    }
    assert result.residual == S.scale(2)
    assert result.solution.status is SolveStatus.INCONSISTENT
    assert result.solution.certificate.to_text() == "i = 0 [E[-1]]"


def test_nogo_main_does_not_depend_on_nu():
    result = nogo_main(main_scheme({"nu": Fraction(5, 7)}))
    assert result.residual == S.scale(2)


def test_nogo_valpha_displays_match_coefficient_for_coefficient():
    result = nogo_valpha()
    a = ALPHA
    i = Scalar.constant(Gaussian(0, 1))
    shared = {("sin", 4): Scalar.constant(-30), ("cos", 3): i * 60, ("sin", 3): a * -120, ("cos", 2): i * a * 180}
    assert result.lhs_display == {
        **shared,
        ("sin", 2): -(a * a * 144 + 84),
        ("cos", 1): i * (a * a * 144 + 54),
        ("sin", 1): -(a * 168 + a * a * a * 48),
        ("cos", 0): i * (a * 54 + a * a * a * 24),
        ("sin", 0): -(a * a * 66 + Fraction(31, 2)),
    }
    assert result.rhs_display == {
        **shared,
        ("sin", 2): -(a * a * 144 + 60),
        ("cos", 1): i * (a * a * 144 + 30),
        ("sin", 1): -(a * 120 + a * a * a * 48),
        ("cos", 0): i * (a * 30 + a * a * a * 24),
        ("sin", 0): -(a * a * 42 + Fraction(15, 2)),
    }
    assert result.residual_display == {
        ("sin", 2): Scalar.constant(-24),
        ("cos", 1): i * 24,
        ("sin", 1): a * -48,
        ("cos", 0): i * a * 24,
        ("sin", 0): -(a * a * 24 + 8),
    }
    assert result.solution.status is SolveStatus.INCONSISTENT
    assert result.solution.certificate.provenance == "E[-1]*D^2"
    assert result.solution.certificate.equation.is_constant()


def test_full_algebra_has_no_trivial_representation():
    report = trivial_rep_checks("full_P")
    assert report.derived == {"Q(cos^2)": Scalar.constant(0), "Q(sin^2)": Scalar.constant(0)}
    assert report.solution.status is SolveStatus.INCONSISTENT
    assert report.solution.certificate.to_text() == "1 = 0 [I]"


def test_alpha_family_trivial_representation():
    report = trivial_rep_checks("valpha", bound=3)
    assert report.solution.assignment == {"mu": -ALPHA}
    assert report.derived["Q(l)"] == -ALPHA
    assert report.derived["Q(b l + c)"] == c - ALPHA * b
    assert report.vanishing == tuple(range(-3, 4))


def test_trivial_kind_is_checked():
    with pytest.raises(ValueError):
        trivial_rep_checks("affine")


def test_position_representations_are_homomorphisms():
    assert posrep_homomorphism(bound=4) == []


def test_position_representations_meet_the_uniqueness_constraints():
    report = uniqueness_constraints(bound=3)
    assert report.ok, report.failures
    assert set(report.verified) >= {"D", "qD", "D=1", "dnD", "action", "MN", "recur1", "plus", "recur2", "minus", "re", "im"}


def test_diagonal_recursion():
    elements = recursion_elements(bound=3)
    assert sorted(elements) == list(range(-3, 4))
    for n, element in elements.items():
        assert recursion_multiple(element, n) == 1
        assert element == recursion_combination(n)


def test_recursion_multiple_rejects_other_combinations():
    assert recursion_multiple(Scalar.xi(0), 0) is None


def test_walpha_generator():
    generator = walpha_generator(3)
    assert generator.support() == [(1, 3), (2, 3)]
    assert generator.coefficient(2, 3) == 1
    assert generator.coefficient(1, 3) == ALPHA * 2
