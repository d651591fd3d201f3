"""Geometric degrees and arithmetic volumes of metrized Hodge bundles.

Volumes are exact: rational coefficients on ``1``, ``2 zeta'(-1)/zeta(-1)``
and ``log p``. Only :func:`evaluate` produces real numbers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import mpmath
from mpmath import mp, mpf
from sympy import factorint

from .hermitian import HermitianSpace, enumerate_spaces
from .quadratic_field import FieldContext
from .zeta import GUARD_DIGITS, zeta_constants

__all__ = [
    "VolumeValue",
    "NumericValue",
    "quaternionic_degree",
    "quaternionic_volume",
    "a0_degree",
    "a0_volume",
    "mass",
    "unitary_degree",
    "unitary_volume",
    "compactified_unitary_degree",
    "compactified_unitary_volume",
    "evaluate",
]


@dataclass(frozen=True)
class VolumeValue:
    """``c_const + c_zeta * 2 zeta'(-1)/zeta(-1) + sum_p c_log[p] * log p``.

    ``str`` writes the zeta ratio as ``Z``.
    """

    c_const: Fraction = Fraction(0)
    c_zeta: Fraction = Fraction(0)
    c_log: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "c_const", Fraction(self.c_const))
        object.__setattr__(self, "c_zeta", Fraction(self.c_zeta))
        logs = {int(p): Fraction(c) for p, c in self.c_log.items() if c}
        object.__setattr__(self, "c_log", dict(sorted(logs.items())))

    def __add__(self, other: "VolumeValue") -> "VolumeValue":
        logs = dict(self.c_log)
        for p, c in other.c_log.items():
            logs[p] = logs.get(p, 0) + c
        return VolumeValue(self.c_const + other.c_const, self.c_zeta + other.c_zeta, logs)

    def __neg__(self) -> "VolumeValue":
        return self * -1

    def __sub__(self, other: "VolumeValue") -> "VolumeValue":
        return self + (-other)

    def __mul__(self, s) -> "VolumeValue":
        s = Fraction(s)
        return VolumeValue(self.c_const * s, self.c_zeta * s, {p: c * s for p, c in self.c_log.items()})

    __rmul__ = __mul__

    def __truediv__(self, s) -> "VolumeValue":
        return self * (1 / Fraction(s))

    def __hash__(self):
        return hash((self.c_const, self.c_zeta, tuple(self.c_log.items())))

    def __str__(self) -> str:
        terms = [(self.c_const, ""), (self.c_zeta, " Z")] + [(c, f" log {p}") for p, c in self.c_log.items()]
        parts = [f"{'-' if c < 0 else '+'} {abs(c)}{unit}" for c, unit in terms if c]
        if not parts:
            return "0"
        out = " ".join(parts)
        return out[2:] if out.startswith("+") else "-" + out[2:]


def _prime_set(n: int) -> list[int]:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        raise ValueError(f"{n} is not squarefree")
    return sorted(f)


def _check_quaternionic(disc_B: int, N: int) -> tuple[list[int], list[int]]:
    if disc_B <= 1:
        raise ValueError("disc(B) must be > 1: the quaternionic formulas need a division algebra")
    if N < 1:
        raise ValueError("level N must be positive")
    ram = _prime_set(disc_B)
    if len(ram) % 2:
        raise ValueError(f"disc(B)={disc_B} has an odd number of prime factors; B would be definite")
    lev = _prime_set(N)
    if set(ram) & set(lev):
        raise ValueError(f"N={N} is not coprime to disc(B)={disc_B}")
    return ram, lev


def _prod(xs) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def quaternionic_degree(disc_B: int, N: int) -> Fraction:
    """Degree of the Hodge bundle of the intermediate surface A_R over X_B(N)."""
    ram, lev = _check_quaternionic(disc_B, N)
    return Fraction(1, 12) * _prod(1 - p for p in ram) * _prod(1 + p for p in lev)


def quaternionic_volume(disc_B: int, N: int) -> VolumeValue:
    ram, lev = _check_quaternionic(disc_B, N)
    deg = quaternionic_degree(disc_B, N)
    logs = {p: -deg * Fraction(1 + p, 1 - p) / 2 for p in ram}
    logs.update({p: -deg * Fraction(1 - p, 1 + p) / 2 for p in lev})
    return VolumeValue(-deg, -deg, logs)


def a0_degree(disc_B: int, N: int) -> Fraction:
    """Degree of the Hodge bundle of the universal A_0 (same as for A_R)."""
    ram, lev = _check_quaternionic(disc_B, N)
    return Fraction(1, 12) * _prod(1 - p for p in ram) * _prod(1 + p for p in lev)


def a0_volume(disc_B: int, N: int) -> VolumeValue:
    ram, _ = _check_quaternionic(disc_B, N)
    deg = a0_degree(disc_B, N)
    return VolumeValue(-deg, -deg, {p: -deg * Fraction(1 + p, 1 - p) / 2 for p in ram})


def mass(p: int, disc_B: int, N: int) -> VolumeValue:
    """Supersingular mass at p | N, as a multiple of log p."""
    ram, lev = _check_quaternionic(disc_B, N)
    if p not in lev:
        raise ValueError(f"p={p} does not divide N={N}")
    c = Fraction(1, 24) * Fraction(p - 1, p + 1) * _prod(l - 1 for l in ram) * _prod(l + 1 for l in lev)
    return VolumeValue(0, 0, {p: c})


def _check_space(ctx: FieldContext, W: HermitianSpace) -> None:
    if W.ctx != ctx or W not in enumerate_spaces(ctx):
        raise ValueError("W is not a hermitian space over this field with a self-dual lattice")


def unitary_degree(ctx: FieldContext, W: HermitianSpace) -> Fraction:
    _check_space(ctx, W)
    return Fraction(1, 12 * ctx.unit_count) * _prod(1 + pc for pc in W.p_circ)


def unitary_volume(ctx: FieldContext, W: HermitianSpace) -> VolumeValue:
    deg = unitary_degree(ctx, W)
    logs = {abs(pc): -deg * Fraction(1 - pc, 1 + pc) / 2 for pc in W.p_circ}
    return VolumeValue(-deg, -deg, logs)


def compactified_unitary_degree(ctx: FieldContext) -> Fraction:
    """Degree for the globally isotropic space, written without signed primes."""
    return Fraction(1, 12 * ctx.unit_count) * _prod(1 + p for p in ctx.disc_primes)


def compactified_unitary_volume(ctx: FieldContext) -> VolumeValue:
    deg = compactified_unitary_degree(ctx)
    return VolumeValue(-deg, -deg, {p: -deg * Fraction(1 - p, 1 + p) / 2 for p in ctx.disc_primes})


@dataclass(frozen=True)
class NumericValue:
    value: mpf
    digits: int
    error_bound: mpf

    def __str__(self) -> str:
        return mpmath.nstr(self.value, self.digits, strip_zeros=False)

    def __float__(self) -> float:
        return float(self.value)


def evaluate(v: VolumeValue, digits: int) -> NumericValue:
    if digits < 1:
        raise ValueError("digits must be positive")
    z = zeta_constants(digits)
    with mp.workdps(digits + GUARD_DIGITS):
        total = mpf(v.c_const.numerator) / v.c_const.denominator
        total += mpf(v.c_zeta.numerator) / v.c_zeta.denominator * z.zeta_ratio
        for p, c in v.c_log.items():
            total += mpf(c.numerator) / c.denominator * mpmath.log(p)
        eps = mpf(10) ** (-(digits + GUARD_DIGITS - 2))
        weight = 1 + sum(abs(c) for c in v.c_log.values())
        bound = abs(mpf(v.c_zeta.numerator) / v.c_zeta.denominator) * 24 * z.error_bound + eps * weight
        return NumericValue(+total, digits, bound)
