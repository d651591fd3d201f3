"""Signature (1,1) hermitian spaces over k and their self-dual lattices.

A space is pinned down by its determinant modulo norms from k, equivalently
by the signs ``(det W, D)_p`` at the primes ``p | D``. Self-dual lattices
are classified by their Steinitz class; each space receives one coset of
the principal genus.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from sympy import divisors

from ._linalg import hnf_rational
from .errors import ConsistencyError
from .quadratic_field import (
    FieldContext,
    FieldElement,
    FormClass,
    FractionalIdeal,
    form_from_ideal,
    ideal_from_form,
    reduced_forms,
)
from .symbols import InvariantVector, hilbert_symbol, relevant_places

__all__ = [
    "HermitianSpace",
    "HermitianLattice",
    "genus_key",
    "enumerate_spaces",
    "space_for_determinant",
    "is_globally_isotropic",
    "lattice_classes",
    "lattice_rep",
    "is_self_dual",
    "dual_lattice",
    "twist",
    "total_census",
]


def genus_key(ctx: FieldContext, det) -> tuple[int, ...]:
    """Signs ``(det, D)_p`` for ``p | D``, in the order of ``ctx.disc_primes``."""
    return tuple(hilbert_symbol(det, ctx.D, p) for p in ctx.disc_primes)


@dataclass(frozen=True)
class HermitianSpace:
    ctx: FieldContext
    det_class: Fraction
    inv: InvariantVector
    p_circ: tuple[int, ...]

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(-1 if p in self.inv.negative_primes else 1 for p in self.ctx.disc_primes)

    @property
    def isotropy(self) -> dict[int, bool]:
        return {p: pc > 0 for p, pc in zip(self.ctx.disc_primes, self.p_circ)}

    @property
    def ramified(self) -> tuple[int, ...]:
        return tuple(p for p, pc in zip(self.ctx.disc_primes, self.p_circ) if pc < 0)

    def invariant(self, v) -> int:
        return self.inv[v]


def space_for_determinant(ctx: FieldContext, det) -> HermitianSpace:
    """The signature (1,1) space with the given (negative) determinant."""
    det = Fraction(det)
    if det >= 0:
        raise ValueError("a signature (1,1) space has negative determinant")
    inv = InvariantVector.from_places(
        relevant_places(det, ctx.D), lambda v: hilbert_symbol(det, ctx.D, v)
    )
    p_circ = []
    for p in ctx.disc_primes:
        # isotropic at p  <=>  inv_p(B) = (-det, D)_p = +1
        iso = hilbert_symbol(-det, ctx.D, p) == 1
        if iso != (hilbert_symbol(-1, ctx.D, p) * inv[p] == 1):
            raise ConsistencyError(f"isotropy at {p} disagrees with the algebra invariant")
        p_circ.append(p if iso else -p)
    return HermitianSpace(ctx, det, inv, tuple(p_circ))


@lru_cache(maxsize=4096)
def enumerate_spaces(ctx: FieldContext) -> tuple[HermitianSpace, ...]:
    """Every signature (1,1) space over k containing a self-dual lattice.

    Determinants are read off the norms of ideals in each class: the lattice
    ``O_k + a`` with form ``diag(1, -1/Nm(a))`` has determinant ``-Nm(a)``
    modulo norms. The representative is the smallest ``m`` dividing ``|D|``
    giving the right genus, else the smallest reduced-form leading
    coefficient in that genus.
    """
    smallest_norm: dict[tuple[int, ...], int] = {}
    for f in reduced_forms(ctx):
        key = genus_key(ctx, -f.A)
        smallest_norm[key] = min(smallest_norm.get(key, f.A), f.A)
    reps = dict(smallest_norm)
    for m in reversed(divisors(-ctx.D)):
        key = genus_key(ctx, -m)
        if key in reps:
            reps[key] = m
    spaces = tuple(space_for_determinant(ctx, -m) for m in sorted(reps.values()))
    if len(spaces) != 2 ** (ctx.o_k - 1):
        raise ConsistencyError(f"D={ctx.D}: found {len(spaces)} spaces, expected {2 ** (ctx.o_k - 1)}")
    return spaces


def is_globally_isotropic(W: HermitianSpace) -> bool:
    return all(pc > 0 for pc in W.p_circ)


def lattice_classes(W: HermitianSpace) -> tuple[FormClass, ...]:
    """Steinitz classes of the self-dual lattices in W (a principal-genus coset)."""
    classes = tuple(f for f in reduced_forms(W.ctx) if genus_key(W.ctx, -f.A) == W.key)
    if not classes:
        raise ValueError(f"no ideal class has norm in the class of {-W.det_class}")
    return classes


# --- lattices ----------------------------------------------------------------

KMatrix = Sequence[Sequence[FieldElement]]


def _hermitian_product(rows_a: KMatrix, gram: KMatrix, rows_b: KMatrix) -> list[list[FieldElement]]:
    n = len(gram)
    out = []
    for x in rows_a:
        row = []
        for y in rows_b:
            s = x[0] * 0
            for i in range(n):
                for j in range(n):
                    s = s + x[i] * gram[i][j] * y[j].conjugate()
            row.append(s)
        out.append(row)
    return out


def _inverse2(m: KMatrix) -> list[list[FieldElement]]:
    (a, b), (c, d) = m
    det = a * d - b * c
    if not det:
        raise ValueError("degenerate hermitian form")
    inv = det.inverse()
    return [[d * inv, -b * inv], [-c * inv, a * inv]]


@dataclass(frozen=True, eq=False)
class HermitianLattice:
    """``L = a1*v1 + a2*v2`` inside ``k^2`` with ambient hermitian Gram matrix ``gram``.

    ``basis`` holds the rows ``v1, v2`` in ambient coordinates.
    """

    ctx: FieldContext
    ideals: tuple[FractionalIdeal, FractionalIdeal]
    basis: tuple[tuple[FieldElement, FieldElement], tuple[FieldElement, FieldElement]]
    gram: tuple[tuple[FieldElement, FieldElement], tuple[FieldElement, FieldElement]]

    @classmethod
    def split(cls, ctx: FieldContext, ideal: FractionalIdeal) -> "HermitianLattice":
        """``O_k + a`` with the form ``x1*conj(y1) - x2*conj(y2)/Nm(a)``."""
        one, zero = ctx.element(1), ctx.element(0)
        return cls(
            ctx,
            (ctx.unit_ideal, ideal),
            ((one, zero), (zero, one)),
            ((one, zero), (zero, ctx.element(-1 / ideal.norm()))),
        )

    @classmethod
    def from_gram(cls, ctx: FieldContext, ideals, gram) -> "HermitianLattice":
        one, zero = ctx.element(1), ctx.element(0)
        g = tuple(tuple(ctx.element(x) if not isinstance(x, FieldElement) else x for x in r) for r in gram)
        return cls(ctx, tuple(ideals), ((one, zero), (zero, one)), g)

    @property
    def steinitz_ideal(self) -> FractionalIdeal:
        (a, b), (c, d) = self.basis
        return self.ideals[0] * self.ideals[1] * (a * d - b * c)

    @property
    def steinitz(self) -> FormClass:
        return form_from_ideal(self.ctx, self.steinitz_ideal)

    @cached_property
    def basis_gram(self) -> list[list[FieldElement]]:
        return _hermitian_product(self.basis, self.gram, self.basis)

    @property
    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.basis_gram
        det = a * d - b * c
        if det.y:
            raise ConsistencyError("hermitian Gram determinant is not rational")
        return det.x

    def pair(self, x, y) -> FieldElement:
        return _hermitian_product([x], self.gram, [y])[0][0]

    def z_basis(self) -> list[tuple[FieldElement, FieldElement]]:
        out = []
        for ideal, v in zip(self.ideals, self.basis):
            for beta in ideal.z_basis():
                out.append((beta * v[0], beta * v[1]))
        return out

    @cached_property
    def canonical(self) -> tuple[int, tuple]:
        rows = [[c for e in vec for c in (e.x, e.y)] for vec in self.z_basis()]
        d, h = hnf_rational(rows)
        return d, tuple(map(tuple, h))

    def same_lattice(self, other: "HermitianLattice") -> bool:
        return self.gram == other.gram and self.canonical == other.canonical

    def is_integral(self) -> bool:
        zb = self.z_basis()
        return all(self.pair(x, y).is_integral() for x in zb for y in zb)

    def __repr__(self) -> str:
        return f"HermitianLattice(D={self.ctx.D}, ideals={self.ideals}, gram={self.basis_gram})"


def dual_lattice(L: HermitianLattice) -> HermitianLattice:
    m = _inverse2(L.basis_gram)
    new_basis = tuple(
        tuple(sum((m[i][k] * L.basis[k][c] for k in range(2)), L.ctx.element(0)) for c in range(2))
        for i in range(2)
    )
    ideals = tuple(a.conjugate().inverse() for a in L.ideals)
    return HermitianLattice(L.ctx, ideals, new_basis, L.gram)


def is_self_dual(L: HermitianLattice) -> bool:
    return L.same_lattice(dual_lattice(L))


def twist(L: HermitianLattice, c: FractionalIdeal) -> HermitianLattice:
    """``c (x) L`` with the form scaled by ``1/Nm(c)``."""
    scale = 1 / c.norm()
    gram = tuple(tuple(g * scale for g in row) for row in L.gram)
    return HermitianLattice(L.ctx, tuple(c * a for a in L.ideals), L.basis, gram)


def lattice_rep(W: HermitianSpace, c: FormClass) -> HermitianLattice:
    if c not in lattice_classes(W):
        raise ValueError(f"{c} is not a Steinitz class of a self-dual lattice in W (det {W.det_class})")
    L = HermitianLattice.split(W.ctx, ideal_from_form(W.ctx, c))
    if genus_key(W.ctx, L.determinant) != W.key:
        raise ConsistencyError("lattice representative lies in the wrong hermitian space")
    if not is_self_dual(L):
        raise ConsistencyError(f"lattice representative for {c} is not self-dual")
    return L


def total_census(ctx: FieldContext) -> int:
    total = sum(len(lattice_classes(W)) for W in enumerate_spaces(ctx))
    h = len(reduced_forms(ctx))
    if total != h:
        raise ConsistencyError(f"D={ctx.D}: {total} self-dual lattices but class number {h}")
    return total
