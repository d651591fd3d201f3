from fractions import Fraction
from itertools import product
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_shimura.errors import InvalidDiscriminantError
from unitary_shimura.quadratic_field import (
    FieldElement,
    FormClass,
    FractionalIdeal,
    check_discriminant,
    compose,
    form_from_ideal,
    ideal_from_form,
    is_odd_fundamental,
    is_principal,
    make_field,
    odd_fundamental_discriminants,
    prime_ideals_above,
    principal_genus,
    reduce_form,
    reduced_forms,
    solve_norm_equation,
)


def brute_reduced_forms(D):
    """Reduced forms of discriminant D straight from the definition."""
    out = set()
    bound = isqrt(-D // 3) + 1
    for a in range(1, bound + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (b < 0 and (a == c)):
                continue
            out.add((a, b, c))
    return out


def test_make_field_examples():
    ctx = make_field(-7)
    assert ctx.unit_count == 2 and ctx.disc_primes == (7,) and ctx.o_k == 1
    assert make_field(-3).unit_count == 6
    assert make_field(-455).o_k == 3


@pytest.mark.parametrize("D,reason", [(-4, "even"), (5, "negative"), (-5, "1 mod 4"), (-27, "squarefree")])
def test_invalid_discriminants(D, reason):
    with pytest.raises(InvalidDiscriminantError, match=reason):
        make_field(D)
    assert not is_odd_fundamental(D)


def test_invalid_discriminant_is_value_error():
    with pytest.raises(ValueError):
        check_discriminant(-8)


def test_enumeration_of_discriminants():
    assert list(odd_fundamental_discriminants(-25, -3)) == [-3, -7, -11, -15, -19, -23]
    assert -75 not in odd_fundamental_discriminants(-100, -3)


@pytest.mark.parametrize(
    "D,forms",
    [(-7, {(1, 1, 2)}), (-15, {(1, 1, 4), (2, 1, 2)}), (-23, {(1, 1, 6), (2, 1, 3), (2, -1, 3)})],
)
def test_reduced_forms_examples(D, forms):
    G = reduced_forms(make_field(D))
    assert {(f.A, f.B, f.C) for f in G} == forms


def test_class_numbers_against_direct_enumeration():
    for D in odd_fundamental_discriminants(-1000, -3):
        G = reduced_forms(make_field(D))
        assert {(f.A, f.B, f.C) for f in G} == brute_reduced_forms(D)


def test_known_class_numbers():
    assert len(reduced_forms(make_field(-455))) == 20
    assert len(reduced_forms(make_field(-163))) == 1
    assert len(reduced_forms(make_field(-47))) == 5


def test_composition_examples():
    ctx = make_field(-23)
    f, g = FormClass(2, 1, 3), FormClass(2, -1, 3)
    assert compose(ctx, f, g) == FormClass(1, 1, 6)
    assert compose(ctx, f, f) == g
    G = reduced_forms(ctx)
    assert compose(ctx, f, G.identity) == f
    assert G.order(f) == 3


def test_composition_rejects_foreign_forms():
    with pytest.raises(ValueError):
        compose(make_field(-23), FormClass(1, 1, 2), FormClass(1, 1, 6))


def test_reduce_form():
    assert reduce_form(6, 5, 2) == FormClass(2, -1, 3)
    assert reduce_form(3, 1, 2) == FormClass(2, -1, 3)
    assert reduce_form(2, -1, 2) == FormClass(2, 1, 2)


@pytest.mark.parametrize("D,size", [(-15, 1), (-23, 3), (-455, 5)])
def test_principal_genus(D, size):
    ctx = make_field(D)
    assert len(principal_genus(ctx, reduced_forms(ctx))) == size


def test_ideal_correspondence():
    ctx = make_field(-23)
    assert ideal_from_form(ctx, FormClass(1, 1, 6)) == ctx.unit_ideal
    a = ideal_from_form(ctx, FormClass(2, 1, 3))
    assert a.norm() == 2
    assert is_principal(ctx, a) is None
    for f in reduced_forms(ctx):
        assert form_from_ideal(ctx, ideal_from_form(ctx, f)) == f


def test_ideal_from_form_rejects_non_reduced():
    with pytest.raises(ValueError):
        ideal_from_form(make_field(-23), FormClass(3, 1, 2))


def test_ideal_basics():
    ctx = make_field(-15)
    O = ctx.unit_ideal
    assert O.norm() == 1
    a = ideal_from_form(ctx, FormClass(2, 1, 2))
    assert a * a.conjugate() == O * a.norm()
    assert a * a.inverse() == O
    assert (a**2).norm() == 4
    assert form_from_ideal(ctx, a**2) == FormClass(1, 1, 4)
    assert ctx.omega in O and ctx.omega not in a


def test_prime_ideals():
    ctx = make_field(-7)
    split = prime_ideals_above(ctx, 2)
    assert len(split) == 2 and all(P.norm() == 2 for P in split)
    inert = prime_ideals_above(ctx, 3)
    assert len(inert) == 1 and inert[0].norm() == 9
    ram = prime_ideals_above(ctx, 7)
    assert len(ram) == 1 and ram[0] ** 2 == ctx.unit_ideal * 7


def test_solve_norm_equation_examples():
    ctx = make_field(-7)
    assert solve_norm_equation(ctx, 1).norm() == 1
    alpha = solve_norm_equation(ctx, 2)
    assert alpha.norm() == 2
    assert solve_norm_equation(make_field(-15), 2) is None


def test_norm_equation_needs_fractional_solutions():
    # 2 is a norm from Q(sqrt(-23)) only of a non-integral element
    ctx = make_field(-23)
    alpha = solve_norm_equation(ctx, 2)
    assert alpha is not None and alpha.norm() == 2 and not alpha.is_integral()


def _norm_box_search(D, q, den_bound=12, box=40):
    """Search x^2 - D y^2 = 4 q d^2 over a box, i.e. Nm((x + y sqrt D)/(2d)) = q."""
    target_num, target_den = q.numerator, q.denominator
    for d in range(1, den_bound + 1):
        rhs = 4 * d * d * target_num
        if rhs % target_den:
            continue
        rhs //= target_den
        for y in range(0, box + 1):
            r = rhs + D * y * y
            if r < 0:
                break
            x = isqrt(r)
            if x * x == r:
                return True
    return False


@given(st.sampled_from([-7, -15, -23, -35, -39, -55, -71, -455]), st.integers(1, 60), st.integers(1, 6))
@settings(max_examples=200, deadline=None)
def test_norm_equation_against_box_search(D, num, den):
    q = Fraction(num, den)
    ctx = make_field(D)
    alpha = solve_norm_equation(ctx, q)
    if alpha is None:
        assert not _norm_box_search(D, q)
    else:
        assert alpha.norm() == q


elements = st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(any)


@given(st.sampled_from([-3, -7, -15, -23, -455]), elements, elements)
@settings(max_examples=200, deadline=None)
def test_element_arithmetic(D, u, v):
    ctx = make_field(D)
    a, b = ctx.integral(*u), ctx.integral(*v)
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a * a.inverse() == ctx.element(1)
    assert (a + b).trace() == a.trace() + b.trace()
    assert (a * b).is_integral()


@given(st.sampled_from([-15, -23, -39, -455]), elements, elements)
@settings(max_examples=100, deadline=None)
def test_ideal_products_match_composition(D, u, v):
    ctx = make_field(D)
    a = FractionalIdeal.from_generators(D, [ctx.integral(*u), ctx.element(3)])
    b = FractionalIdeal.from_generators(D, [ctx.integral(*v), ctx.element(5)])
    assert (a * b).norm() == a.norm() * b.norm()
    assert a * a.conjugate() == ctx.unit_ideal * a.norm()
    assert form_from_ideal(ctx, a * b) == compose(ctx, form_from_ideal(ctx, a), form_from_ideal(ctx, b))


def test_group_axioms_exhaustive_small():
    for D in odd_fundamental_discriminants(-200, -3):
        ctx = make_field(D)
        G = reduced_forms(ctx)
        for f, g, h in product(G, repeat=3):
            assert compose(ctx, compose(ctx, f, g), h) == compose(ctx, f, compose(ctx, g, h))


def test_field_element_repr_and_zero():
    z = FieldElement(0, 0, -7)
    assert not z
    with pytest.raises(ZeroDivisionError):
        z.inverse()
