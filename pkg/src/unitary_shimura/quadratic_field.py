"""Imaginary quadratic fields of odd discriminant.

Elements are stored as ``x + y*sqrt(D)`` with rational ``x, y``; ideals as
Hermite-normal-form Z-bases over ``{1, w}`` with ``w = (1 + sqrt(D))/2``;
ideal classes as reduced primitive positive definite binary quadratic
forms ``(A, B, C)`` with ``B^2 - 4AC = D``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Iterable, Iterator, Optional

from sympy import factorint
from sympy.ntheory import sqrt_mod

from ._linalg import hnf_rational
from .errors import ConsistencyError, InvalidDiscriminantError

__all__ = [
    "FieldContext",
    "FieldElement",
    "FractionalIdeal",
    "FormClass",
    "ClassGroup",
    "check_discriminant",
    "is_odd_fundamental",
    "odd_fundamental_discriminants",
    "make_field",
    "reduce_form",
    "reduced_forms",
    "compose",
    "principal_genus",
    "ideal_from_form",
    "form_from_ideal",
    "prime_ideals_above",
    "is_principal",
    "solve_norm_equation",
    "represent",
]


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def check_discriminant(D: int) -> None:
    """Raise InvalidDiscriminantError naming the first failed condition."""
    if not isinstance(D, int) or isinstance(D, bool):
        raise InvalidDiscriminantError(f"discriminant must be an integer, got {D!r}")
    if D >= 0:
        raise InvalidDiscriminantError(f"D={D} is not negative (the field must be imaginary quadratic)")
    if D % 2 == 0:
        raise InvalidDiscriminantError(f"D={D} is even; only odd discriminants are supported")
    if D % 4 != 1:
        raise InvalidDiscriminantError(f"D={D} is odd but not 1 mod 4, so it is not a discriminant")
    if D == -1 or not _squarefree(D):
        raise InvalidDiscriminantError(f"D={D} is not squarefree, so it is not a fundamental discriminant")


def is_odd_fundamental(D: int) -> bool:
    try:
        check_discriminant(D)
    except InvalidDiscriminantError:
        return False
    return True


def odd_fundamental_discriminants(d_min: int, d_max: int) -> Iterator[int]:
    """Odd fundamental D with ``d_min <= D <= d_max < 0``, ordered by ``|D|``."""
    for D in range(min(d_max, -3), d_min - 1, -1):
        if D % 4 == 1 and is_odd_fundamental(D):
            yield D


@dataclass(frozen=True)
class FieldContext:
    D: int
    unit_count: int
    disc_primes: tuple[int, ...]

    @property
    def o_k(self) -> int:
        return len(self.disc_primes)

    @property
    def omega(self) -> "FieldElement":
        return FieldElement(Fraction(1, 2), Fraction(1, 2), self.D)

    @property
    def delta(self) -> "FieldElement":
        """The square root of D with positive imaginary part."""
        return FieldElement(Fraction(0), Fraction(1), self.D)

    def element(self, x, y=0) -> "FieldElement":
        return FieldElement(Fraction(x), Fraction(y), self.D)

    def integral(self, a, b) -> "FieldElement":
        return FieldElement.from_integral(a, b, self.D)

    @property
    def unit_ideal(self) -> "FractionalIdeal":
        return FractionalIdeal(1, 0, 1, 1, self.D)


@lru_cache(maxsize=None)
def make_field(D: int) -> FieldContext:
    check_discriminant(D)
    primes = tuple(sorted(factorint(-D)))
    return FieldContext(D=D, unit_count=6 if D == -3 else 2, disc_primes=primes)


@dataclass(frozen=True)
class FieldElement:
    """``x + y*sqrt(D)``."""

    x: Fraction
    y: Fraction
    D: int

    @classmethod
    def from_integral(cls, a, b, D: int) -> "FieldElement":
        """``a + b*w`` with ``w = (1 + sqrt(D))/2``."""
        a, b = Fraction(a), Fraction(b)
        return cls(a + b / 2, b / 2, D)

    @property
    def integral_coords(self) -> tuple[Fraction, Fraction]:
        return self.x - self.y, 2 * self.y

    def is_integral(self) -> bool:
        a, b = self.integral_coords
        return a.denominator == 1 and b.denominator == 1

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.D != self.D:
                raise ValueError("elements of different fields")
            return other
        return FieldElement(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElement":
        return FieldElement(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element of k")
        c = self.conjugate()
        return FieldElement(c.x / n, c.y / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def __repr__(self) -> str:
        return f"({self.x} + {self.y}*sqrt({self.D}))"


@dataclass(frozen=True)
class FractionalIdeal:
    """``(1/d) * (Z*a + Z*(b + c*w))`` in Hermite normal form.

    ``a, c, d > 0``, ``0 <= b < a``, ``c | a``, ``c | b`` and the overall
    content is coprime to ``d``, so two ideals are equal iff their fields are.
    """

    a: int
    b: int
    c: int
    d: int
    D: int

    @classmethod
    def from_generators(cls, D: int, gens: Iterable[FieldElement]) -> "FractionalIdeal":
        """The O_k-module generated by ``gens``."""
        w = FieldElement(Fraction(1, 2), Fraction(1, 2), D)
        rows = []
        for g in gens:
            for h in (g, g * w):
                a, b = h.integral_coords
                rows.append([b, a])
        den, h = hnf_rational(rows)
        if len(h) != 2:
            raise ValueError("generators do not span a rank-2 lattice")
        (c, b), (_, a) = h
        ideal = cls(a, b, c, den, D)
        ideal._check()
        return ideal

    @classmethod
    def from_z_basis(cls, D: int, basis: Iterable[FieldElement]) -> "FractionalIdeal":
        rows = []
        for h in basis:
            a, b = h.integral_coords
            rows.append([b, a])
        den, h = hnf_rational(rows)
        if len(h) != 2:
            raise ValueError("not a rank-2 lattice")
        (c, b), (_, a) = h
        ideal = cls(a, b, c, den, D)
        ideal._check()
        return ideal

    def _check(self) -> None:
        if not (self.a > 0 and self.c > 0 and self.d > 0 and 0 <= self.b < self.a):
            raise ConsistencyError(f"ideal not in Hermite normal form: {self}")
        if self.a % self.c or self.b % self.c:
            raise ConsistencyError(f"lattice {self} is not closed under multiplication by w")
        for g in self.z_basis():
            if g * FieldElement(Fraction(1, 2), Fraction(1, 2), self.D) not in self:
                raise ConsistencyError(f"lattice {self} is not closed under multiplication by w")

    def z_basis(self) -> tuple[FieldElement, FieldElement]:
        D = self.D
        return (
            FieldElement.from_integral(Fraction(self.a, self.d), 0, D),
            FieldElement.from_integral(Fraction(self.b, self.d), Fraction(self.c, self.d), D),
        )

    def __contains__(self, elem: FieldElement) -> bool:
        u, v = elem.integral_coords
        u, v = u * self.d, v * self.d
        # u + v*w = s*a + t*(b + c*w)
        t = v / self.c
        if t.denominator != 1:
            return False
        s = (u - t * self.b) / self.a
        return s.denominator == 1

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.d * self.d)

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        if isinstance(other, FieldElement):
            return FractionalIdeal.from_generators(self.D, [g * other for g in self.z_basis()])
        if isinstance(other, (int, Fraction)):
            return self * FieldElement(Fraction(other), Fraction(0), self.D)
        if other.D != self.D:
            raise ValueError("ideals of different fields")
        return FractionalIdeal.from_generators(self.D, [g * h for g in self.z_basis() for h in other.z_basis()])

    __rmul__ = __mul__

    def conjugate(self) -> "FractionalIdeal":
        return FractionalIdeal.from_z_basis(self.D, [g.conjugate() for g in self.z_basis()])

    def inverse(self) -> "FractionalIdeal":
        return self.conjugate() / self.norm()

    def __truediv__(self, other) -> "FractionalIdeal":
        if isinstance(other, FractionalIdeal):
            return self * other.inverse()
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return self * FieldElement(1 / Fraction(other), Fraction(0), self.D)

    def __pow__(self, n: int) -> "FractionalIdeal":
        if n < 0:
            return self.inverse() ** (-n)
        out = FractionalIdeal(1, 0, 1, 1, self.D)
        for _ in range(n):
            out = out * self
        return out

    def is_integral(self) -> bool:
        return self.d == 1

    def __repr__(self) -> str:
        return f"Ideal(D={self.D}: ({self.a}, {self.b} + {self.c}w)/{self.d})"


# --- binary quadratic forms ------------------------------------------------


@dataclass(frozen=True, order=True)
class FormClass:
    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def inverse(self) -> "FormClass":
        return reduce_form(self.A, -self.B, self.C)

    def label(self) -> str:
        return f"({self.A},{self.B},{self.C})"

    def __repr__(self) -> str:
        return f"Form{self.label()}"


def reduce_form(A: int, B: int, C: int) -> FormClass:
    """Reduce a positive definite form to the unique reduced form in its class."""
    if A <= 0 or B * B - 4 * A * C >= 0:
        raise ValueError(f"({A},{B},{C}) is not positive definite")
    while True:
        # normalize: -A < B <= A
        if not (-A < B <= A):
            r = (A - B) // (2 * A)
            C = A * r * r + B * r + C
            B = B + 2 * r * A
        if A > C:
            A, B, C = C, -B, A
            continue
        if A == C and B < 0:
            B = -B
        return FormClass(A, B, C)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _compose_forms(f: FormClass, g: FormClass) -> FormClass:
    D = f.discriminant
    a1, b1, _ = f.A, f.B, f.C
    a2, b2, _ = g.A, g.B, g.C
    s = (b1 + b2) // 2
    g1, x1, y1 = _xgcd(a1, a2)
    e, x2, w = _xgcd(g1, s)
    u, v = x2 * x1, x2 * y1
    # u*a1 + v*a2 + w*s = e
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    if B * B - 4 * A * C != D:
        raise ConsistencyError(f"composition of {f} and {g} left discriminant {D}")
    return reduce_form(A, B, C)


@dataclass(frozen=True)
class ClassGroup:
    ctx: FieldContext
    elements: tuple[FormClass, ...]

    @property
    def identity(self) -> FormClass:
        return FormClass(1, 1, (1 - self.ctx.D) // 4)

    def compose(self, f: FormClass, g: FormClass) -> FormClass:
        return compose(self.ctx, f, g)

    def power(self, f: FormClass, n: int) -> FormClass:
        if n < 0:
            f, n = f.inverse(), -n
        out = self.identity
        for _ in range(n):
            out = self.compose(out, f)
        return out

    def order(self, f: FormClass) -> int:
        n, x = 1, f
        while x != self.identity:
            x = self.compose(x, f)
            n += 1
        return n

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, f) -> bool:
        return f in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def principal_genus(self) -> tuple[FormClass, ...]:
        return principal_genus(self.ctx, self)


@lru_cache(maxsize=4096)
def reduced_forms(ctx: FieldContext) -> ClassGroup:
    """All reduced primitive forms of discriminant D, sorted by (A, B, C)."""
    D = ctx.D
    forms = []
    bound = isqrt(-D // 3)
    for A in range(1, bound + 1):
        for B in range(-A + 1, A + 1):
            if (B * B - D) % (4 * A):
                continue
            C = (B * B - D) // (4 * A)
            if C < A or gcd(gcd(A, B), C) != 1:
                continue
            if A == C and B < 0:
                continue
            forms.append(FormClass(A, B, C))
    return ClassGroup(ctx, tuple(sorted(forms)))


def compose(ctx: FieldContext, f: FormClass, g: FormClass) -> FormClass:
    if f.discriminant != ctx.D or g.discriminant != ctx.D:
        raise ValueError(f"forms {f}, {g} do not both have discriminant {ctx.D}")
    return _compose_forms(f, g)


def principal_genus(ctx: FieldContext, G: ClassGroup) -> tuple[FormClass, ...]:
    squares = sorted({compose(ctx, f, f) for f in G.elements})
    expected, rem = divmod(len(G.elements), 2 ** (ctx.o_k - 1))
    if rem or len(squares) != expected:
        raise ConsistencyError(
            f"D={ctx.D}: {len(squares)} squares in a class group of order {len(G.elements)} "
            f"with {ctx.o_k} ramified primes"
        )
    return tuple(squares)


# --- forms <-> ideals ------------------------------------------------------


def _ideal_of_form(D: int, A: int, B: int) -> FractionalIdeal:
    # Z*A + Z*(-B + sqrt(D))/2 = Z*A + Z*((-B-1)/2 + w)
    return FractionalIdeal(A, ((-B - 1) // 2) % A, 1, 1, D)


def ideal_from_form(ctx: FieldContext, f: FormClass) -> FractionalIdeal:
    if f.discriminant != ctx.D:
        raise ValueError(f"{f} does not have discriminant {ctx.D}")
    if not f.is_reduced():
        raise ValueError(f"{f} is not reduced")
    return _ideal_of_form(ctx.D, f.A, f.B)


def form_from_ideal(ctx: FieldContext, ideal: FractionalIdeal) -> FormClass:
    """Reduced form of the ideal class of ``ideal``."""
    # Scaling by d and 1/c does not change the class.
    A = ideal.a // ideal.c
    B = -(2 * (ideal.b // ideal.c) + 1)
    C = (B * B - ctx.D) // (4 * A)
    return reduce_form(A, B, C)


# --- principal ideals and norm equations ------------------------------------


def represent(A: int, B: int, C: int, T: int) -> list[tuple[int, int]]:
    """All integer (x, y) with A x^2 + B xy + C y^2 = T for a positive definite form."""
    disc = 4 * A * C - B * B
    if T < 0 or disc <= 0 or A <= 0:
        return []
    out = []
    ymax = isqrt(4 * A * T // disc) + 1
    for y in range(-ymax, ymax + 1):
        # (2Ax + By)^2 = 4AT - disc*y^2
        r = 4 * A * T - disc * y * y
        if r < 0:
            continue
        s = isqrt(r)
        if s * s != r:
            continue
        for t in {s, -s}:
            num = t - B * y
            if num % (2 * A) == 0:
                out.append((num // (2 * A), y))
    return out


def is_principal(ctx: FieldContext, ideal: FractionalIdeal) -> Optional[FieldElement]:
    """A generator of ``ideal``, or None when it is not principal."""
    v1, v2 = ideal.z_basis()
    v1, v2 = v1 * ideal.d, v2 * ideal.d
    A = int(v1.norm())
    B = int((v1 * v2.conjugate()).trace())
    C = int(v2.norm())
    target = ideal.norm() * ideal.d * ideal.d
    for x, y in sorted(represent(A, B, C, int(target))):
        return (v1 * x + v2 * y) * Fraction(1, ideal.d)
    return None


def prime_ideals_above(ctx: FieldContext, p: int) -> list[FractionalIdeal]:
    """Prime ideals of O_k over the rational prime p (one if inert or ramified)."""
    D = ctx.D
    if p == 2:
        if D % 8 == 5:
            return [FractionalIdeal(2, 0, 2, 1, D)]
        return [_ideal_of_form(D, 2, 1), _ideal_of_form(D, 2, -1)]
    if D % p == 0:
        return [_ideal_of_form(D, p, p)]
    roots = sqrt_mod(D % p, p, all_roots=True)
    if not roots:
        return [FractionalIdeal(p, 0, p, 1, D)]
    b = roots[0] if roots[0] % 2 == 1 else p - roots[0]
    return [_ideal_of_form(D, p, b), _ideal_of_form(D, p, -b)]


def _ideal_of_norm(ctx: FieldContext, n: int) -> Optional[FractionalIdeal]:
    """Some integral ideal of norm n, or None if an inert prime divides n to an odd power."""
    out = ctx.unit_ideal
    for p, e in factorint(n).items():
        P = prime_ideals_above(ctx, p)[0]
        if P.norm() == p * p:
            if e % 2:
                return None
            e //= 2
        out = out * P**e
    return out


def solve_norm_equation(ctx: FieldContext, q) -> Optional[FieldElement]:
    """Some alpha in k with Nm(alpha) = q, or None if q is not a norm from k.

    An ideal b of norm q exists unless an inert prime divides q to an odd
    power. The ideals of norm q are the b * conj(c)/c, whose classes run over
    [b] times the squares, so q is a norm iff [b] is a square.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("norm equation needs q > 0")
    if q == 1:
        return ctx.element(1)
    num = _ideal_of_norm(ctx, q.numerator)
    den = _ideal_of_norm(ctx, q.denominator)
    if num is None or den is None:
        return None
    b = num / den
    cls = form_from_ideal(ctx, b)
    G = reduced_forms(ctx)
    for f in G:
        if compose(ctx, f, f) == cls:
            c = ideal_from_form(ctx, f)
            b = b * c.conjugate() / c
            break
    else:
        return None
    alpha = is_principal(ctx, b)
    if alpha is None or alpha.norm() != q:
        raise ConsistencyError(f"norm solver failed to find a generator for {b} of norm {q}")
    return alpha
