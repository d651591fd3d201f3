from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_shimura._linalg import det
from unitary_shimura.hermitian import enumerate_spaces, is_self_dual, lattice_classes, lattice_rep
from unitary_shimura.quadratic_field import FormClass, make_field
from unitary_shimura.quaternion import (
    QuaternionAlgebra,
    algebra_from_space,
    construct_eichler_order,
    hermitian_form,
    level,
    reduced_discriminant,
    symplectic_form,
)
from unitary_shimura.symbols import INFINITY


def _space(D, det):
    return next(W for W in enumerate_spaces(make_field(D)) if W.det_class == det)


def test_algebra_minus_7():
    B = algebra_from_space(_space(-7, -1))
    assert (B.a, B.b) == (-7, 1)
    assert B.ramified == () and B.disc == 1
    assert level(make_field(-7), B) == 7


def test_algebra_minus_15_anisotropic():
    ctx = make_field(-15)
    B = algebra_from_space(_space(-15, -3))
    assert B.disc == 15 and B.is_indefinite
    assert level(ctx, B) == 1


def test_algebra_minus_455():
    ctx = make_field(-455)
    discs = {algebra_from_space(W).disc: level(ctx, algebra_from_space(W)) for W in enumerate_spaces(ctx)}
    assert discs[35] == 13
    assert all(len(algebra_from_space(W).ramified) % 2 == 0 for W in enumerate_spaces(ctx))


def test_level_rejects_foreign_algebra():
    with pytest.raises(ValueError):
        level(make_field(-7), QuaternionAlgebra(-1, -1))


def test_definite_algebra_detected():
    B = QuaternionAlgebra(-1, -1)
    assert not B.is_indefinite and B.ramified == (2,) and B.invariant(INFINITY) == -1


coords = st.tuples(*[st.integers(-20, 20)] * 4)
algebras = st.sampled_from([(-7, 1), (-15, 3), (-23, 1), (-455, 13), (-39, 2)])


@given(algebras, coords, coords)
@settings(max_examples=200, deadline=None)
def test_algebra_identities(ab, u, v):
    B = QuaternionAlgebra(*ab)
    x, y = B.element(*u), B.element(*v)
    assert (x * y).nrd() == x.nrd() * y.nrd()
    assert (x * y).trd() == (y * x).trd()
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()
    assert B.i * B.j == -(B.j * B.i)
    assert B.i.nrd() == -B.a


@given(algebras, coords, coords, coords)
@settings(max_examples=200, deadline=None)
def test_symplectic_form(ab, u, v, w):
    B = QuaternionAlgebra(*ab)
    x, y, b = B.element(*u), B.element(*v), B.element(*w)
    assert symplectic_form(x, x) == 0
    assert symplectic_form(x, y) == -symplectic_form(y, x)
    # the positive involution is the adjoint of left multiplication
    assert symplectic_form(b * x, y) == symplectic_form(x, B.dagger(b) * y)
    kx = B.element(u[0], u[1])
    kjy = B.element(0, 0, v[2], v[3])
    assert symplectic_form(kjy, kx) == 0


@given(algebras, coords, coords)
@settings(max_examples=200, deadline=None)
def test_hermitian_form_and_symplectic_form_agree(ab, u, v):
    # lambda(x, y) = Trd(i^-1 <x, y>) with <x, y> in k = Q + Q i
    B = QuaternionAlgebra(*ab)
    x, y = B.element(*u), B.element(*v)
    h = hermitian_form(x, y)
    assert symplectic_form(x, y) == (B.i.inverse() * B.element(h.x, h.y)).trd()
    assert hermitian_form(y, x) == h.conjugate()


def test_dagger_on_generators():
    B = QuaternionAlgebra(-7, 1)
    assert B.dagger(B.j) == B.j
    assert B.dagger(B.i) == -B.i
    assert B.dagger(B.dagger(B.k)) == B.k


def test_reduced_discriminant_of_matrix_ring():
    # (1, 1) is M_2(Q); e11, e12, e21, e22 in terms of 1, i, j, k
    B = QuaternionAlgebra(1, 1)
    half = Fraction(1, 2)
    basis = [B.element(half, half), B.element(0, 0, half, half), B.element(0, 0, half, -half), B.element(half, -half)]
    assert reduced_discriminant(basis) == 1


def test_reduced_discriminant_rejects_non_order():
    B = QuaternionAlgebra(-7, 1)
    with pytest.raises(ValueError):
        reduced_discriminant([B.one, B.i, B.j, B.k * Fraction(1, 3)])


def test_eichler_order_minus_7():
    ctx = make_field(-7)
    W = _space(-7, -1)
    R = construct_eichler_order(W, lattice_rep(W, FormClass(1, 1, 2)))
    assert R.reduced_discriminant == 7 and R.level_N == 7
    gram = [[(e * f).trd() for f in R.basis] for e in R.basis]
    assert abs(det(gram)) == 49
    for e in R.basis:
        assert R.alg.dagger(e) in R
    assert is_self_dual(R.hermitian_lattice(ctx))


@pytest.mark.parametrize("D", [-23, -15, -39, -455])
def test_eichler_orders_every_class(D):
    ctx = make_field(D)
    for W in enumerate_spaces(ctx):
        for c in lattice_classes(W):
            R = construct_eichler_order(W, lattice_rep(W, c))
            assert R.reduced_discriminant == -D
            assert R.hermitian_lattice(ctx).steinitz == c
            assert R.alg.embed(ctx.omega) in R


def test_eichler_order_rejects_foreign_lattice():
    iso, aniso = enumerate_spaces(make_field(-15))
    with pytest.raises(ValueError):
        construct_eichler_order(iso, lattice_rep(aniso, lattice_classes(aniso)[0]))
