"""Legendre and Hilbert symbols over Q, and the local invariants built on them.

A place is either a rational prime (an ``int``) or :data:`INFINITY`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Callable, Iterable, Union

from sympy import isprime, primefactors

from .quadratic_field import check_discriminant

__all__ = [
    "INFINITY",
    "Place",
    "InvariantVector",
    "legendre",
    "hilbert_symbol",
    "hilbert_product",
    "relevant_places",
    "space_invariant",
    "algebra_invariant_from_space",
]

INFINITY = inf
Place = Union[int, float]


def _check_place(v) -> None:
    if v == INFINITY:
        return
    if isinstance(v, bool) or not isinstance(v, int) or not isprime(v):
        raise ValueError(f"{v!r} is neither a prime nor the infinite place")


def legendre(a: int, p: int) -> int:
    if p == 2 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _square_class(a) -> int:
    """An integer in the same square class as the nonzero rational ``a``."""
    q = Fraction(a)
    if q == 0:
        raise ValueError("Hilbert symbol of zero")
    return q.numerator * q.denominator


def _split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _hilbert_int(a: int, b: int, p) -> int:
    if p == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= legendre(u, p)
    if alpha % 2:
        s *= legendre(v, p)
    return s


def hilbert_symbol(a, b, v: Place) -> int:
    """(a, b)_v for nonzero rationals a, b."""
    _check_place(v)
    return _hilbert_int(_square_class(a), _square_class(b), v)


def relevant_places(*values) -> list:
    """Infinity and every prime dividing 2 and the numerators/denominators given."""
    primes = {2}
    for x in values:
        q = Fraction(x)
        primes.update(primefactors(abs(q.numerator)))
        primes.update(primefactors(q.denominator))
    return sorted(primes) + [INFINITY]


def hilbert_product(a, b) -> int:
    """Product of (a, b)_v over all places; Hilbert reciprocity says this is 1."""
    out = 1
    for v in relevant_places(a, b):
        out *= hilbert_symbol(a, b, v)
    return out


@dataclass(frozen=True)
class InvariantVector:
    """Local signs indexed by place, stored by the finite support of -1's."""

    negative_primes: frozenset[int]
    at_infinity: int = 1

    @classmethod
    def from_places(cls, places: Iterable, sign: Callable[[Place], int]) -> "InvariantVector":
        neg = set()
        inf_sign = 1
        for v in places:
            s = sign(v)
            if v == INFINITY:
                inf_sign = s
            elif s == -1:
                neg.add(v)
        return cls(frozenset(neg), inf_sign)

    def __getitem__(self, v: Place) -> int:
        if v == INFINITY:
            return self.at_infinity
        return -1 if v in self.negative_primes else 1

    def product(self) -> int:
        return self.at_infinity * (-1) ** len(self.negative_primes)

    def __mul__(self, other: "InvariantVector") -> "InvariantVector":
        return InvariantVector(self.negative_primes ^ other.negative_primes, self.at_infinity * other.at_infinity)

    def sorted_primes(self) -> list[int]:
        return sorted(self.negative_primes)


def space_invariant(detW, D: int, v: Place) -> int:
    """inv_v(W) = (det W, D)_v."""
    check_discriminant(D)
    return hilbert_symbol(detW, D, v)


def algebra_invariant_from_space(detW, D: int, v: Place) -> int:
    """inv_v(B) = (-1, D)_v * inv_v(W) for the quaternion algebra attached to W."""
    check_discriminant(D)
    return hilbert_symbol(-1, D, v) * hilbert_symbol(detW, D, v)
