"""zeta(-1) and zeta'(-1) to arbitrary precision, computed two ways.

* ``glaisher_route``: log of the Glaisher-Kinkelin constant from the
  asymptotic expansion of the hyperfactorial, then
  ``zeta'(-1) = 1/12 - log A``.
* ``functional_equation_route``: ``zeta'(-1)`` from ``zeta'(2)`` through the
  functional equation, with ``zeta'(2) = -sum log(n)/n^2`` summed by
  Euler-Maclaurin.

Agreement of the two values is the certificate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath
from mpmath import mp, mpf

__all__ = ["ZetaConstants", "PrecisionError", "zeta_constants", "glaisher_route", "functional_equation_route"]

GUARD_DIGITS = 15


class PrecisionError(ArithmeticError):
    pass


def _cutoff(digits: int) -> int:
    return max(20, digits)


def _max_terms(n: int) -> int:
    return int(3.14 * n)


def glaisher_route(digits: int) -> mpf:
    """zeta'(-1) from log H(n) = log A + (n^2/2 + n/2 + 1/12) log n - n^2/4 + O(n^-2)."""
    with mp.workdps(digits + GUARD_DIGITS):
        n = _cutoff(digits)
        eps = mpf(10) ** (-(digits + GUARD_DIGITS))
        s = mpmath.fsum(k * mpmath.log(k) for k in range(2, n + 1))
        ln_n = mpmath.log(n)
        log_a = s - (mpf(n) ** 2 / 2 + mpf(n) / 2 + mpf(1) / 12) * ln_n + mpf(n) ** 2 / 4
        # Euler-Maclaurin tail: f(x) = x log x, f^(2j-1)(x) = -(2j-3)! x^(2-2j)
        # terms shrink until j ~ pi*n, where the expansion starts to diverge
        for j in range(2, _max_terms(n)):
            term = mpmath.bernoulli(2 * j) / ((2 * j) * (2 * j - 1) * (2 * j - 2)) / mpf(n) ** (2 * j - 2)
            log_a += term
            if abs(term) < eps:
                break
        else:
            raise PrecisionError("asymptotic series for log A did not converge")
        return mpf(1) / 12 - log_a


def _g_derivative(m: int, x: mpf) -> mpf:
    """m-th derivative of log(x) / x^2."""
    out = (-1) ** m * factorial(m + 1) * mpmath.log(x)
    for r in range(1, m + 1):
        out += comb(m, r) * (-1) ** (m - r) * factorial(m - r + 1) * (-1) ** (r - 1) * factorial(r - 1)
    return out / x ** (m + 2)


def _zeta_prime_2(digits: int) -> mpf:
    n = _cutoff(digits)
    eps = mpf(10) ** (-(digits + GUARD_DIGITS))
    x = mpf(n)
    head = mpmath.fsum(mpmath.log(k) / mpf(k) ** 2 for k in range(2, n))
    tail = (mpmath.log(x) + 1) / x + mpmath.log(x) / x**2 / 2
    for j in range(1, _max_terms(n)):
        term = -mpmath.bernoulli(2 * j) / factorial(2 * j) * _g_derivative(2 * j - 1, x)
        tail += term
        if abs(term) < eps:
            break
    else:
        raise PrecisionError("Euler-Maclaurin tail for zeta'(2) did not converge")
    return -(head + tail)


def functional_equation_route(digits: int) -> mpf:
    """zeta'(-1) = (1 - gamma - log(2 pi))/12 + zeta'(2)/(2 pi^2)."""
    with mp.workdps(digits + GUARD_DIGITS):
        zp2 = _zeta_prime_2(digits)
        return (1 - mp.euler - mpmath.log(2 * mp.pi)) / 12 + zp2 / (2 * mp.pi**2)


@dataclass(frozen=True)
class ZetaConstants:
    zeta_m1: Fraction
    zeta_prime_m1: mpf
    precision_digits: int
    error_bound: mpf

    @property
    def zeta_ratio(self) -> mpf:
        """2 zeta'(-1) / zeta(-1) = -24 zeta'(-1)."""
        with mp.workdps(self.precision_digits + GUARD_DIGITS):
            return -24 * self.zeta_prime_m1


@lru_cache(maxsize=32)
def zeta_constants(digits: int) -> ZetaConstants:
    if digits < 1:
        raise ValueError("digits must be positive")
    a = glaisher_route(digits)
    b = functional_equation_route(digits)
    with mp.workdps(digits + GUARD_DIGITS):
        gap = abs(a - b)
        if gap > mpf(10) ** (-digits):
            raise PrecisionError(f"zeta'(-1) routes disagree by {mpmath.nstr(gap, 5)} at {digits} digits")
        return ZetaConstants(Fraction(-1, 12), +a, digits, gap + mpf(10) ** (-(digits + GUARD_DIGITS - 2)))
