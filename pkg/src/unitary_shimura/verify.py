"""Property suites, runnable from the command line or from tests.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
property, so a whole suite can report all of its failures at once.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm
from typing import Callable, Iterable

import numpy as np
from mpmath import mp, mpf
from sympy import factorint, primefactors, primerange

from ._linalg import hnf_int, hnf_rational, inverse
from .errors import ConsistencyError
from .hermitian import (
    dual_lattice,
    enumerate_spaces,
    is_globally_isotropic,
    is_self_dual,
    lattice_classes,
    lattice_rep,
    total_census,
)
from .quadratic_field import (
    compose,
    form_from_ideal,
    ideal_from_form,
    make_field,
    odd_fundamental_discriminants,
    reduced_forms,
)
from .quaternion import algebra_from_space, construct_eichler_order
from .symbols import INFINITY, algebra_invariant_from_space, hilbert_product, hilbert_symbol, relevant_places
from .volumes import (
    a0_volume,
    compactified_unitary_degree,
    compactified_unitary_volume,
    evaluate,
    mass,
    quaternionic_degree,
    quaternionic_volume,
    unitary_degree,
    unitary_volume,
    VolumeValue,
)
from .zeta import functional_equation_route, glaisher_route

SCOPES = ("symbols", "classgroup", "lattices", "orders", "volumes")


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, what: Callable[[], str] | str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(what() if callable(what) else what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name} (checked {self.checked}, failed {len(self.failures)}{extra})"


def _discriminants(bound: int) -> Iterable[int]:
    return odd_fundamental_discriminants(-bound, -3)


# --- symbols -----------------------------------------------------------------


def _strip_p_squares(a: int, p: int) -> int:
    while a % (p * p) == 0:
        a //= p * p
    return a


@lru_cache(maxsize=None)
def _square_tables(p: int):
    M = p**3
    r = np.arange(M, dtype=np.int64)
    is_square = np.zeros(M, dtype=bool)
    is_square[(r * r) % M] = True
    all_sq = np.unique((r * r) % M)
    p_sq = np.unique((r[::p] ** 2) % M)  # squares of multiples of p
    return M, is_square, all_sq, p_sq


def conic_solvable_bruteforce(a: int, b: int, p: int) -> bool:
    """Whether a x^2 + b y^2 = z^2 has a primitive solution modulo p^3 (odd p).

    Factors of p^2 are removed from a and b first, so both have p-adic
    valuation at most 1; a primitive solution is scaled so that its first
    unit coordinate is 1.
    """
    a, b = _strip_p_squares(a, p), _strip_p_squares(b, p)
    M, is_square, all_sq, p_sq = _square_tables(p)
    # x = 1
    if is_square[(a + b * all_sq) % M].any():
        return True
    # x in pZ, y = 1
    if is_square[(a * p_sq + b) % M].any():
        return True
    # x, y in pZ, z = 1
    return bool(np.isin((1 - b * p_sq) % M, (a * p_sq) % M).any())


def check_hilbert_oracle(max_p: int = 50, box: int = 30) -> CheckResult:
    res = CheckResult("symbols.hilbert_vs_conic_bruteforce")
    values = [v for v in range(-box, box + 1) if v]
    for p in primerange(3, max_p + 1):
        for a in values:
            for b in values:
                brute = 1 if conic_solvable_bruteforce(a, b, p) else -1
                res.expect(hilbert_symbol(a, b, p) == brute, lambda: f"({a},{b})_{p}")
    return res


def check_reciprocity(samples: int = 10_000, bound: int = 10_000, seed: int = 0) -> CheckResult:
    res = CheckResult("symbols.hilbert_reciprocity")
    rng = random.Random(seed)

    def rand_q():
        n = rng.choice([-1, 1]) * rng.randint(1, bound)
        return Fraction(n, rng.randint(1, bound))

    for _ in range(samples):
        a, b = rand_q(), rand_q()
        res.expect(hilbert_product(a, b) == 1, lambda: f"product over places of ({a},{b}) != 1")
    return res


def check_symmetry(samples: int = 2_000, seed: int = 1) -> CheckResult:
    res = CheckResult("symbols.symmetry_and_square_classes")
    rng = random.Random(seed)
    for _ in range(samples):
        a = rng.choice([-1, 1]) * rng.randint(1, 500)
        b = rng.choice([-1, 1]) * rng.randint(1, 500)
        c = rng.randint(1, 30)
        for v in relevant_places(a, b, c):
            s = hilbert_symbol(a, b, v)
            res.expect(s == hilbert_symbol(b, a, v), lambda: f"({a},{b})_{v} not symmetric")
            res.expect(s == hilbert_symbol(a * c * c, b, v), lambda: f"({a}*{c}^2,{b})_{v} changed")
    return res


def check_indefinite(bound: int) -> CheckResult:
    res = CheckResult("symbols.indefiniteness")
    for D in _discriminants(bound):
        for W in enumerate_spaces(make_field(D)):
            res.expect(algebra_invariant_from_space(W.det_class, D, INFINITY) == 1, f"D={D} det={W.det_class}")
    return res


# --- class groups --------------------------------------------------------------


def check_genus_formula(bound: int) -> CheckResult:
    res = CheckResult("classgroup.genus_formula")
    for D in _discriminants(bound):
        ctx = make_field(D)
        G = reduced_forms(ctx)
        squares = {compose(ctx, f, f) for f in G}
        res.expect(
            len(squares) * 2 ** (ctx.o_k - 1) == len(G),
            lambda: f"D={D}: {len(squares)} squares, h={len(G)}, o={ctx.o_k}",
        )
    return res


def check_group_axioms(bound: int) -> CheckResult:
    res = CheckResult("classgroup.group_axioms")
    for D in _discriminants(bound):
        ctx = make_field(D)
        G = reduced_forms(ctx)
        e = G.identity
        table = {(f, g): compose(ctx, f, g) for f in G for g in G}
        for f in G:
            res.expect(table[f, e] == f, f"D={D}: {f} * 1 != {f}")
            res.expect(table[f, f.inverse()] == e, f"D={D}: {f} * {f}^-1 != 1")
            for g in G:
                res.expect(table[f, g] in G and table[f, g] == table[g, f], f"D={D}: {f}*{g}")
                for h in G:
                    res.expect(table[table[f, g], h] == table[f, table[g, h]], f"D={D}: assoc {f},{g},{h}")
    return res


def check_ideal_isomorphism(bound: int) -> CheckResult:
    res = CheckResult("classgroup.forms_ideals_isomorphism")
    for D in _discriminants(bound):
        ctx = make_field(D)
        G = reduced_forms(ctx)
        ideals = {f: ideal_from_form(ctx, f) for f in G}
        for f in G:
            res.expect(form_from_ideal(ctx, ideals[f]) == f, f"D={D}: round trip of {f}")
            res.expect(ideals[f].norm() == f.A, f"D={D}: norm of ideal of {f}")
            for g in G:
                prod = form_from_ideal(ctx, ideals[f] * ideals[g])
                res.expect(prod == compose(ctx, f, g), f"D={D}: ideal product of {f},{g}")
    return res


# --- hermitian lattices ---------------------------------------------------------


def check_space_count_and_partition(bound: int) -> CheckResult:
    res = CheckResult("lattices.steinitz_partition")
    for D in _discriminants(bound):
        ctx = make_field(D)
        G = reduced_forms(ctx)
        try:
            spaces = enumerate_spaces(ctx)
            total = total_census(ctx)
        except ConsistencyError as exc:
            res.expect(False, f"D={D}: {exc}")
            continue
        res.expect(len(spaces) == 2 ** (ctx.o_k - 1), f"D={D}: {len(spaces)} spaces")
        res.expect(total == len(G), f"D={D}: census {total} != h {len(G)}")
        seen: list = []
        cl0 = G.principal_genus
        for W in spaces:
            classes = lattice_classes(W)
            seen.extend(classes)
            coset = {compose(ctx, classes[0], g) for g in cl0}
            res.expect(set(classes) == coset, f"D={D}: lattice classes of det {W.det_class} are not a CL_0 coset")
            res.expect(len(classes) == len(cl0), f"D={D}: |L_W| != |CL_0|")
        res.expect(sorted(seen) == sorted(G.elements), f"D={D}: cosets do not partition CL(k)")
        res.expect(sum(map(is_globally_isotropic, spaces)) == 1, f"D={D}: not exactly one isotropic space")
    return res


def _dual_by_pairing(L) -> tuple[int, tuple]:
    """The hermitian dual of L found by solving the integrality conditions directly."""
    zb = L.z_basis()
    # <x, z_j> in O_k for all j, with x = sum c_i z_i: c @ M integral
    cols = []
    for zj in zb:
        for which in (0, 1):
            col = []
            for zi in zb:
                u, v = L.pair(zi, zj).integral_coords
                col.append(u if which == 0 else v)
            cols.append(col)
    den = lcm(*(x.denominator for col in cols for x in col))
    # the column lattice in Z^4 (scaled by den); its dual is {c : c.H in Z^4}
    H = hnf_int([[int(x * den) for x in col] for col in cols])
    Hinv = inverse([[Fraction(x, den) for x in row] for row in H])
    # dual coordinates c are the rows of (H^T)^-1 = columns of H^-1
    basis_coords = [[Hinv[r][c] for r in range(4)] for c in range(4)]
    vectors = []
    for coords in basis_coords:
        vec = [Fraction(0)] * 4
        for c, z in zip(coords, zb):
            comps = [z[0].x, z[0].y, z[1].x, z[1].y]
            vec = [a + c * b for a, b in zip(vec, comps)]
        vectors.append(vec)
    d, h = hnf_rational(vectors)
    return d, tuple(map(tuple, h))


def check_self_duality_oracle(bound: int) -> CheckResult:
    res = CheckResult("lattices.self_duality_oracle")
    for D in _discriminants(bound):
        ctx = make_field(D)
        for W in enumerate_spaces(ctx):
            for c in lattice_classes(W):
                L = lattice_rep(W, c)
                closed = dual_lattice(L)
                res.expect(_dual_by_pairing(L) == closed.canonical, f"D={D} class {c}: duals disagree")
                res.expect(is_self_dual(L), f"D={D} class {c}: not self-dual")
                res.expect(L.steinitz == c, f"D={D} class {c}: Steinitz round trip")
    return res


# --- quaternion orders -----------------------------------------------------------


def check_invariant_match(bound: int) -> CheckResult:
    res = CheckResult("orders.invariant_match")
    for D in _discriminants(bound):
        ctx = make_field(D)
        for W in enumerate_spaces(ctx):
            try:
                B = algebra_from_space(W)
            except ConsistencyError as exc:
                res.expect(False, f"D={D}: {exc}")
                continue
            for v in relevant_places(B.a, B.b):
                res.expect(
                    B.invariant(v) == hilbert_symbol(-1, D, v) * hilbert_symbol(W.det_class, D, v),
                    f"D={D} det={W.det_class} place {v}",
                )
            res.expect(B.invariant(INFINITY) == 1, f"D={D}: B definite")
            res.expect((-D) % B.disc == 0, f"D={D}: disc(B)={B.disc} does not divide |D|")
    return res


def check_eichler_orders(bound: int) -> CheckResult:
    res = CheckResult("orders.eichler_construction")
    for D in _discriminants(bound):
        ctx = make_field(D)
        for W in enumerate_spaces(ctx):
            for c in lattice_classes(W):
                try:
                    R = construct_eichler_order(W, lattice_rep(W, c))
                    res.expect(R.reduced_discriminant == -D, f"D={D} {c}: reduced discriminant")
                except ConsistencyError as exc:
                    res.expect(False, f"D={D} {c}: {exc}")
    return res


# --- volumes -------------------------------------------------------------------


def check_projection_formula(bound: int) -> CheckResult:
    res = CheckResult("volumes.projection_formula")
    for D in _discriminants(bound):
        ctx = make_field(D)
        for W in enumerate_spaces(ctx):
            deg = unitary_degree(ctx, W)
            res.expect(deg > 0, f"D={D} det={W.det_class}: degree {deg} not positive")
            if is_globally_isotropic(W):
                res.expect(deg == compactified_unitary_degree(ctx), f"D={D}: isotropic degree mismatch")
                res.expect(
                    unitary_volume(ctx, W) == compactified_unitary_volume(ctx), f"D={D}: isotropic volume mismatch"
                )
                continue
            B = algebra_from_space(W)
            N = -D // B.disc
            res.expect(
                ctx.unit_count * unitary_volume(ctx, W) == quaternionic_volume(B.disc, N),
                f"D={D} det={W.det_class}: volume identity",
            )
            res.expect(ctx.unit_count * deg == quaternionic_degree(B.disc, N), f"D={D}: degree identity")
    return res


def admissible_pairs(count: int) -> list[tuple[int, int]]:
    """The first ``count`` (disc_B, N) pairs in order of disc_B * N."""
    out = []
    n = 2
    while len(out) < count:
        f = factorint(n)
        if all(e == 1 for e in f.values()):
            primes = sorted(f)
            # every split of the prime set into an even-size ramified part
            for r in range(2, len(primes) + 1, 2):
                for ram in combinations(primes, r):
                    disc = 1
                    for p in ram:
                        disc *= p
                    out.append((disc, n // disc))
        n += 1
    return out[:count]


def check_mass_decomposition(count: int = 200) -> CheckResult:
    res = CheckResult("volumes.mass_decomposition")
    for disc, N in admissible_pairs(count):
        lhs = a0_volume(disc, N) - quaternionic_volume(disc, N)
        rhs = VolumeValue()
        for p in primefactors(N):
            rhs = rhs - mass(p, disc, N)
        res.expect(lhs == rhs, f"disc_B={disc}, N={N}")
    return res


def check_zeta(digits: int = 30) -> CheckResult:
    res = CheckResult("volumes.zeta_certification")
    a, b = glaisher_route(digits), functional_equation_route(digits)
    with mp.workdps(digits + 10):
        res.expect(abs(a - b) < mpf(10) ** (-digits), f"routes differ by {abs(a - b)}")
    v = VolumeValue(Fraction(-1, 3), Fraction(-1, 3), {3: Fraction(1, 3), 5: Fraction(1, 4)})
    lo, hi = evaluate(v, digits), evaluate(v, 2 * digits)
    with mp.workdps(2 * digits + 10):
        res.expect(abs(lo.value - hi.value) < mpf(10) ** (-digits), "evaluation unstable under precision doubling")
    return res


def run_scope(scope: str, bound: int) -> list[CheckResult]:
    if scope == "all":
        return [r for s in SCOPES for r in run_scope(s, bound)]
    if scope == "symbols":
        return [check_hilbert_oracle(), check_reciprocity(), check_symmetry(), check_indefinite(bound)]
    if scope == "classgroup":
        small = min(bound, 500)
        return [check_genus_formula(bound), check_group_axioms(small), check_ideal_isomorphism(small)]
    if scope == "lattices":
        return [check_space_count_and_partition(bound), check_self_duality_oracle(min(bound, 200))]
    if scope == "orders":
        return [check_invariant_match(bound), check_eichler_orders(bound)]
    if scope == "volumes":
        return [check_projection_formula(bound), check_mass_decomposition(), check_zeta()]
    raise ValueError(f"unknown scope {scope!r}; choose from {SCOPES + ('all',)}")
