"""The quaternion algebra attached to a hermitian space, and its Eichler orders.

For a space W of determinant ``det`` the algebra is ``(D, -det / Q)`` with
``i^2 = D`` and ``j^2 = -det``; k sits inside it as ``Q + Q*i`` via
``sqrt(D) -> i``. The Eichler order attached to a self-dual lattice with
Steinitz ideal ``a`` is ``O_k + a*j`` once ``a`` is rescaled so that
``Nm(a) * j^2 = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from sympy import factorint

from ._linalg import det as _det
from ._linalg import hnf_rational, inverse
from .errors import ConsistencyError
from .hermitian import HermitianLattice, HermitianSpace, is_self_dual, lattice_classes
from .quadratic_field import FieldContext, FieldElement, FormClass, FractionalIdeal, solve_norm_equation
from .symbols import INFINITY, algebra_invariant_from_space, hilbert_symbol, relevant_places

__all__ = [
    "QuaternionAlgebra",
    "QuaternionElement",
    "EichlerOrder",
    "algebra_from_space",
    "level",
    "symplectic_form",
    "hermitian_form",
    "construct_eichler_order",
    "reduced_discriminant",
]


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: Fraction
    b: Fraction
    ramified: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if not self.a or not self.b:
            raise ValueError("quaternion algebra needs nonzero a, b")
        ram = tuple(
            p for p in relevant_places(self.a, self.b) if p != INFINITY and hilbert_symbol(self.a, self.b, p) == -1
        )
        object.__setattr__(self, "ramified", ram)

    @property
    def disc(self) -> int:
        out = 1
        for p in self.ramified:
            out *= p
        return out

    @property
    def is_indefinite(self) -> bool:
        return hilbert_symbol(self.a, self.b, INFINITY) == 1

    def invariant(self, v) -> int:
        return hilbert_symbol(self.a, self.b, v)

    def element(self, w=0, x=0, y=0, z=0) -> "QuaternionElement":
        return QuaternionElement(self, Fraction(w), Fraction(x), Fraction(y), Fraction(z))

    @property
    def one(self) -> "QuaternionElement":
        return self.element(1)

    @property
    def i(self) -> "QuaternionElement":
        return self.element(0, 1)

    @property
    def j(self) -> "QuaternionElement":
        return self.element(0, 0, 1)

    @property
    def k(self) -> "QuaternionElement":
        return self.element(0, 0, 0, 1)

    def embed(self, alpha: FieldElement) -> "QuaternionElement":
        """Image of ``x + y*sqrt(D)`` under ``sqrt(D) -> i``; requires ``a == D``."""
        if self.a != alpha.D:
            raise ValueError("algebra is not presented with i^2 = D")
        return self.element(alpha.x, alpha.y)

    def dagger(self, q: "QuaternionElement") -> "QuaternionElement":
        """The positive involution ``q -> delta * conj(q) * delta^-1`` with ``delta = i``."""
        delta = self.i
        return delta * q.conjugate() * delta.inverse()


@dataclass(frozen=True)
class QuaternionElement:
    alg: QuaternionAlgebra
    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w, self.x, self.y, self.z)

    def _lift(self, other) -> "QuaternionElement":
        if isinstance(other, QuaternionElement):
            if other.alg != self.alg:
                raise ValueError("elements of different algebras")
            return other
        return self.alg.element(other)

    def __add__(self, other):
        o = self._lift(other)
        return QuaternionElement(self.alg, *(s + t for s, t in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuaternionElement(self.alg, -self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        if not isinstance(other, QuaternionElement):
            c = Fraction(other)
            return QuaternionElement(self.alg, *(c * t for t in self.coords))
        o = self._lift(other)
        a, b = self.alg.a, self.alg.b
        w1, x1, y1, z1 = self.coords
        w2, x2, y2, z2 = o.coords
        return QuaternionElement(
            self.alg,
            w1 * w2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
            w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
            w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )

    def __rmul__(self, other):
        return self * other

    def conjugate(self) -> "QuaternionElement":
        return QuaternionElement(self.alg, self.w, -self.x, -self.y, -self.z)

    def trd(self) -> Fraction:
        return 2 * self.w

    def nrd(self) -> Fraction:
        a, b = self.alg.a, self.alg.b
        return self.w**2 - a * self.x**2 - b * self.y**2 + a * b * self.z**2

    def inverse(self) -> "QuaternionElement":
        n = self.nrd()
        if not n:
            raise ZeroDivisionError("element has zero reduced norm")
        return self.conjugate() * (1 / n)

    def __repr__(self) -> str:
        return f"[{self.w}, {self.x}, {self.y}, {self.z}]"


def algebra_from_space(W: HermitianSpace) -> QuaternionAlgebra:
    B = QuaternionAlgebra(Fraction(W.ctx.D), -W.det_class)
    for v in relevant_places(B.a, B.b):
        if B.invariant(v) != algebra_invariant_from_space(W.det_class, W.ctx.D, v):
            raise ConsistencyError(f"local invariant of B at {v} does not match the hermitian space")
    if not B.is_indefinite:
        raise ConsistencyError("quaternion algebra of a signature (1,1) space must be indefinite")
    if len(B.ramified) % 2:
        raise ConsistencyError(f"odd number of ramified primes {B.ramified}")
    if B.ramified != W.ramified:
        raise ConsistencyError(f"ramification {B.ramified} disagrees with the anisotropic primes {W.ramified}")
    return B


def level(ctx: FieldContext, B: QuaternionAlgebra) -> int:
    N, r = divmod(-ctx.D, B.disc)
    if r:
        raise ValueError(f"disc(B)={B.disc} does not divide |D|={-ctx.D}")
    return N


def symplectic_form(x: QuaternionElement, y: QuaternionElement, delta: QuaternionElement | None = None) -> Fraction:
    """``Trd(delta^-1 * x * conj(y))``."""
    if delta is None:
        delta = x.alg.i
    return (delta.inverse() * x * y.conjugate()).trd()


def hermitian_form(x: QuaternionElement, y: QuaternionElement) -> FieldElement:
    """The k-component of ``x * conj(y)`` in ``B = k + k*j``."""
    p = x * y.conjugate()
    return FieldElement(p.w, p.x, int(x.alg.a))


def reduced_discriminant(basis: Sequence[QuaternionElement]) -> int:
    """``sqrt(|det Trd(e_i e_j)|)`` for a Z-basis of an order."""
    gram = [[(e * f).trd() for f in basis] for e in basis]
    d = abs(_det(gram))
    if d.denominator != 1 or isqrt(d.numerator) ** 2 != d.numerator:
        raise ValueError(f"trace-form determinant {d} is not a square integer; not an order")
    if d == 0:
        raise ValueError("basis is degenerate")
    return isqrt(d.numerator)


@dataclass(frozen=True, eq=False)
class EichlerOrder:
    alg: QuaternionAlgebra
    basis: tuple[QuaternionElement, ...]
    level_N: int
    ideal: FractionalIdeal
    scale: FieldElement
    steinitz: FormClass

    def _inv(self):
        return inverse([list(e.coords) for e in self.basis])

    def coordinates(self, q: QuaternionElement) -> list[Fraction]:
        inv = self._inv()
        return [sum((q.coords[r] * inv[r][c] for r in range(4)), Fraction(0)) for c in range(4)]

    def __contains__(self, q: QuaternionElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(q))

    @property
    def reduced_discriminant(self) -> int:
        return reduced_discriminant(self.basis)

    def symplectic_gram(self) -> list[list[Fraction]]:
        return [[symplectic_form(e, f) for f in self.basis] for e in self.basis]

    def hermitian_lattice(self, ctx: FieldContext) -> HermitianLattice:
        """R as the O_k-module ``O_k*1 + a*j`` with the form read off the algebra."""
        one, j = self.alg.one, self.alg.j
        gram = ((hermitian_form(one, one), hermitian_form(one, j)), (hermitian_form(j, one), hermitian_form(j, j)))
        return HermitianLattice.from_gram(ctx, (ctx.unit_ideal, self.ideal), gram)


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def _z_span_key(vectors) -> tuple:
    d, h = hnf_rational([list(v) for v in vectors])
    return d, tuple(map(tuple, h))


def construct_eichler_order(W: HermitianSpace, L: HermitianLattice) -> EichlerOrder:
    """Build ``R = O_k + a*j`` for the lattice L in W and verify every defining property."""
    ctx = W.ctx
    if L.steinitz not in lattice_classes(W):
        raise ValueError("lattice does not belong to the hermitian space W")
    B = algebra_from_space(W)
    j_sq = B.b
    a0 = L.steinitz_ideal
    target = a0.norm() * j_sq
    alpha = solve_norm_equation(ctx, target)
    if alpha is None:
        raise ConsistencyError(
            f"Nm(a)*j^2 = {target} is not a norm from k, although the Steinitz coset forces it to be"
        )
    a = a0 / alpha
    if a.norm() * j_sq != 1:
        raise ConsistencyError("rescaled ideal does not satisfy Nm(a)*j^2 = 1")

    basis = [B.one, B.embed(ctx.omega)] + [B.embed(beta) * B.j for beta in a.z_basis()]
    N = level(ctx, B)
    R = EichlerOrder(B, tuple(basis), N, a, alpha, L.steinitz)
    _verify_order(ctx, W, L, R)
    return R


def _verify_order(ctx: FieldContext, W: HermitianSpace, L: HermitianLattice, R: EichlerOrder) -> None:
    B = R.alg
    for e in R.basis:
        for f in R.basis:
            if e * f not in R:
                raise ConsistencyError(f"R is not closed under multiplication: {e} * {f}")
    if B.one not in R or B.embed(ctx.omega) not in R:
        raise ConsistencyError("R does not contain O_k")
    for e in R.basis:
        if B.dagger(e) not in R:
            raise ConsistencyError(f"R is not stable under the positive involution: {e}")
    disc = R.reduced_discriminant
    if disc != -ctx.D or not _is_squarefree(disc):
        raise ConsistencyError(f"reduced discriminant {disc} != |D| = {-ctx.D}")
    if disc != R.level_N * B.disc:
        raise ConsistencyError("reduced discriminant is not N * disc(B)")
    lam = R.symplectic_gram()
    if any(x.denominator != 1 for row in lam for x in row) or abs(_det(lam)) != 1:
        raise ConsistencyError("R is not a self-dual Z-lattice under the symplectic form")
    H = R.hermitian_lattice(ctx)
    # the O_k-module description must span the same Z-lattice as the basis
    as_k2 = [(c for e in v for c in (e.x, e.y)) for v in H.z_basis()]
    as_b = [(q.w, q.x, q.y, q.z) for q in R.basis]
    if _z_span_key(as_k2) != _z_span_key(as_b):
        raise ConsistencyError("O_k-module presentation of R disagrees with its Z-basis")
    if not is_self_dual(H):
        raise ConsistencyError("R is not self-dual under the hermitian form")
    if H.steinitz != L.steinitz:
        raise ConsistencyError(f"Steinitz class of R is {H.steinitz}, lattice has {L.steinitz}")
