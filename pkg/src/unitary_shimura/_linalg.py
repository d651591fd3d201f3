"""Small exact linear algebra over Z and Q.

Everything here works on lists of lists of ``int`` or ``Fraction``; the
matrices involved never exceed 8 x 4, so clarity wins over speed.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def common_denominator(rows: Sequence[Sequence[Fraction]]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def hnf_int(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form of the Z-span of ``rows``.

    Returns the nonzero rows, upper triangular with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    out: list[list[int]] = []
    for col in range(ncols):
        live = [r for r in a if r[col] != 0]
        rest = [r for r in a if r[col] == 0]
        if not live:
            a = rest
            continue
        # Euclid on the column until a single row keeps a nonzero entry.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = rest
    # reduce above-pivot entries
    for i in range(len(out)):
        col = next(c for c, x in enumerate(out[i]) if x)
        p = out[i][col]
        for k in range(i):
            q = out[k][col] // p
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def hnf_rational(rows: Sequence[Sequence[Fraction]]) -> tuple[int, list[list[int]]]:
    """Canonical form ``(d, H)`` of the Z-span of rational vectors: span = H / d."""
    d = common_denominator(rows)
    ints = [[int(Fraction(x) * d) for x in r] for r in rows]
    h = hnf_int(ints)
    g = 0
    for r in h:
        for x in r:
            g = gcd(g, x)
    g = gcd(g, d)
    if g > 1:
        h = [[x // g for x in r] for r in h]
        d //= g
    return d, h


def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        result *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * result


def inverse(m: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def coordinates(basis_inv: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    """Coordinates of row vector ``v`` against a basis whose inverse is given."""
    n = len(basis_inv)
    return [sum((Fraction(v[k]) * basis_inv[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
