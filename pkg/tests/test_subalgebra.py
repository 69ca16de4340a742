from fractions import Fraction

import pytest
from hypothesis import given, seed, settings
import hypothesis.strategies as st

from cylnogo.classical import ClassicalElement, ell, exp_i
from cylnogo.errors import CutoffError, ParameterError
from cylnogo.subalgebra import (
    FilteredBasis,
    Membership,
    affine_box_generators,
    basic_generators,
    closure,
    irreducibility_probe,
    leading_term_scan,
    member,
    preset_generators,
    walpha_generators,
)

SEED = 1729
THIRD = Fraction(1, 3)

# brackets of monomials are monomials, so truncation never splits a sum
monomials = st.builds(
    ClassicalElement.monomial, st.integers(0, 2), st.integers(-2, 2), st.integers(1, 3)
)
generator_sets = st.lists(monomials, min_size=1, max_size=4)


@pytest.fixture(scope="module")
def walpha():
    return closure(walpha_generators(5, THIRD), (3, 5))


def test_basic_set_closes_on_itself():
    basis = closure(basic_generators(), (3, 4))
    assert basis.dimension == 4
    assert basis.pivots == [(0, -1), (0, 0), (0, 1), (1, 0)]
    assert all(vector.degree <= 1 for vector in basis.vectors)


def test_adjoining_l_squared_fills_the_box():
    basis = closure(basic_generators() + [ell(2)], (3, 4))
    assert basis.box_dimension == 36
    assert basis.is_full_box()


@pytest.mark.parametrize("extra", [ell(2), ell(2) * exp_i(1), ell(3) * exp_i(2)])
def test_affine_algebra_is_maximal(extra):
    basis = closure(affine_box_generators(4) + [extra], (3, 4))
    assert basis.is_full_box()


def test_affine_algebra_alone_stays_affine():
    basis = closure(affine_box_generators(4), (3, 4))
    assert basis.dimension == 18
    assert all(vector.degree <= 1 for vector in basis.vectors)


def test_products_flag():
    assert closure(basic_generators(), (2, 2)).dimension == 4
    assert closure(basic_generators(), (2, 2), products=True).is_full_box()


def test_even_harmonics_stay_out_of_walpha(walpha):
    for m in (-4, -2, 2, 4):
        result = member(exp_i(m), walpha)
        assert result.status is Membership.NOT_FOUND_AT_CUTOFF
        assert not result.certified


@pytest.mark.parametrize("N", [-2, -1, 0, 1, 2])
def test_walpha_contains_shifted_affine_elements(walpha, N):
    result = member(ClassicalElement({(1, 2 * N): 1, (0, 2 * N): THIRD}), walpha)
    assert result.certified
    assert result.to_text().startswith("certified in: ")


def test_walpha_vectors_are_harmonic_homogeneous(walpha):
    assert all(len(vector.harmonics()) == 1 for vector in walpha.vectors)


def test_leading_term_scan_finds_every_degree(walpha):
    entries = leading_term_scan(walpha, THIRD)
    assert entries
    assert {entry.degree for entry in entries} == {1, 2, 3}
    for entry in entries:
        assert entry.found, (entry.degree, entry.harmonic)
        top = entry.witness.homogeneous_part(entry.degree) + entry.witness.homogeneous_part(entry.degree - 1)
        assert top == entry.target
        assert member(entry.witness, walpha).certified


def test_membership_outside_the_box():
    basis = closure(basic_generators(), (1, 1))
    result = member(ell(2), basis)
    assert result.status is Membership.NOT_FOUND_AT_CUTOFF
    assert result.to_text().startswith("not found at cutoff")


def test_generators_must_fit_the_box():
    with pytest.raises(CutoffError):
        closure([ell(4)], (3, 4))
    with pytest.raises(CutoffError):
        FilteredBasis.span([exp_i(6)], (1, 5))


def test_formal_parameters_need_an_assignment():
    with pytest.raises(ParameterError):
        closure(walpha_generators(3), (3, 3))
    basis = closure(walpha_generators(3), (3, 3), {"alpha": THIRD})
    assert member(exp_i(2), basis).status is Membership.NOT_FOUND_AT_CUTOFF


def test_span_is_reduced():
    basis = FilteredBasis.span([ell() + exp_i(1), exp_i(1), ell()], (1, 1))
    assert basis.dimension == 2
    assert basis.vectors == (exp_i(1), ell())


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_ladders_reach_every_harmonic(r):
    report = irreducibility_probe(r, 1, 6)
    assert report.complete
    assert not report.fixed_seed


def test_probe_flags_fixed_seeds():
    report = irreducibility_probe(0, 0, 3)
    assert report.fixed_seed
    assert report.reached == (0,)
    assert report.missing == (-3, -2, -1, 1, 2, 3)
    with pytest.raises(CutoffError):
        irreducibility_probe(1, 5, 3)


def test_presets():
    assert len(preset_generators("B", (3, 4))) == 4
    assert len(preset_generators("P1", (3, 2))) == 10
    assert len(preset_generators("Walpha", (3, 3), THIRD)) == 4 + 4
    with pytest.raises(ParameterError):
        preset_generators("Q", (3, 3))


@seed(SEED)
@settings(derandomize=True, max_examples=40, deadline=None)
@given(generator_sets, generator_sets)
def test_closure_is_monotone_in_the_generators(generators, extra):
    smaller = closure(generators, (2, 2))
    larger = closure(generators + extra, (2, 2))
    assert smaller.dimension <= larger.dimension
    assert all(member(vector, larger).certified for vector in smaller.vectors)


@seed(SEED)
@settings(derandomize=True, max_examples=40, deadline=None)
@given(generator_sets)
def test_closure_is_monotone_in_the_cutoff(generators):
    smaller = closure(generators, (2, 2))
    larger = closure(generators, (3, 3))
    assert smaller.dimension <= larger.dimension
    assert all(member(vector, larger).certified for vector in smaller.vectors)
