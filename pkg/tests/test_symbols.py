import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_shimura.symbols import (
    INFINITY,
    InvariantVector,
    algebra_invariant_from_space,
    hilbert_product,
    hilbert_symbol,
    legendre,
    relevant_places,
    space_invariant,
)
from unitary_shimura.verify import conic_solvable_bruteforce

nonzero = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Fraction, nonzero, st.integers(1, 10**4))


@pytest.mark.parametrize("a,p,expected", [(1, 7, 1), (-1, 7, -1), (2, 5, -1), (14, 7, 0)])
def test_legendre(a, p, expected):
    assert legendre(a, p) == expected


def test_legendre_needs_odd_prime():
    with pytest.raises(ValueError):
        legendre(3, 2)
    with pytest.raises(ValueError):
        legendre(3, 9)


@pytest.mark.parametrize(
    "a,b,v,expected",
    [(1, 5, 5, 1), (1, -3, INFINITY, 1), (-1, -1, INFINITY, -1), (-1, -7, 7, -1), (-1, -1, 2, -1), (2, 3, 3, -1)],
)
def test_hilbert_symbol_values(a, b, v, expected):
    assert hilbert_symbol(a, b, v) == expected


def test_hilbert_symbol_oracle_spot():
    # -x^2 - 7y^2 = z^2 has no primitive solution mod 7^3
    assert not conic_solvable_bruteforce(-1, -7, 7)
    assert conic_solvable_bruteforce(-1, -15, 5)


def test_hilbert_symbol_rejects_bad_input():
    with pytest.raises(ValueError):
        hilbert_symbol(0, 3, 3)
    with pytest.raises(ValueError):
        hilbert_symbol(2, 3, 4)


def test_hilbert_symbol_rational_arguments():
    # square classes ignore square denominators
    assert hilbert_symbol(Fraction(-1, 4), -7, 7) == hilbert_symbol(-1, -7, 7)
    assert hilbert_symbol(Fraction(2, 3), 5, 5) == hilbert_symbol(6, 5, 5)


@pytest.mark.parametrize("a,b", [(-1, -1), (3, 5), (-7, -1), (Fraction(2, 3), -15)])
def test_product_formula_examples(a, b):
    assert hilbert_product(a, b) == 1


def test_relevant_places_order():
    assert relevant_places(-15, 14) == [2, 3, 5, 7, INFINITY]


@given(rationals, rationals)
@settings(max_examples=300, deadline=None)
def test_reciprocity(a, b):
    assert hilbert_product(a, b) == 1


@given(nonzero, nonzero, st.sampled_from([2, 3, 5, 7, 11, 13, INFINITY]))
@settings(max_examples=300, deadline=None)
def test_symmetry_and_bilinearity(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    c = random.Random(a ^ b).randint(1, 50)
    assert hilbert_symbol(a * c, b, v) == hilbert_symbol(a, b, v) * hilbert_symbol(c, b, v)
    assert hilbert_symbol(a, -a, v) == 1


@pytest.mark.parametrize(
    "det,D,v,expected", [(-1, -7, 7, -1), (-1, -15, 5, 1), (1, -7, 7, 1), (1, -23, INFINITY, 1)]
)
def test_space_invariant(det, D, v, expected):
    assert space_invariant(det, D, v) == expected


@pytest.mark.parametrize("det,D,v", [(-1, -7, 7), (-1, -7, INFINITY), (-3, -15, 3), (-3, -15, 5)])
def test_algebra_invariant_from_space(det, D, v):
    assert algebra_invariant_from_space(det, D, v) == hilbert_symbol(-1, D, v) * space_invariant(det, D, v)


def test_algebra_invariant_examples():
    assert algebra_invariant_from_space(-1, -7, 7) == 1
    assert algebra_invariant_from_space(-1, -7, INFINITY) == 1
    assert algebra_invariant_from_space(-3, -15, 3) == -1
    for v in (2, 3, 5, INFINITY):
        assert algebra_invariant_from_space(1, -15, v) == hilbert_symbol(-1, -15, v)


def test_space_invariant_rejects_even_discriminant():
    with pytest.raises(ValueError):
        space_invariant(-1, -4, 2)


def test_invariant_vector():
    inv = InvariantVector.from_places([2, 3, 5, INFINITY], lambda v: hilbert_symbol(-3, -15, v))
    assert inv.sorted_primes() == [5]
    assert inv[3] == 1 and inv[7] == 1 and inv[INFINITY] == -1
    assert inv.product() == 1
    assert (inv * inv).product() == 1 and (inv * inv).sorted_primes() == []
