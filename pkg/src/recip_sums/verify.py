"""Invariant suites run by ``recip-sums verify``.

Each check returns a :class:`SuiteResult`; the ``quick`` level uses small
grids (seconds), ``full`` the complete ones (minutes).  The acceptance tests
call the same checks with the criterion grids spelled out explicitly.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import bounds
from .counting import (
    char_moment,
    count_I_lambda,
    count_J_conv,
    count_J_naive,
    count_N,
    count_N_brute,
    count_N_tuples,
    count_N_tuples_direct,
    prime_set,
    rho_census,
)
from .errors import EmptyPrimeSet
from .field import FieldContext, MultChar, PolySpec, is_prime, mod_inv, rho_int
from .pigeonhole import canonical_targets, find_t
from .regions import _slice, region_from_polygon, region_rectangle, weights_random, weights_unit
from .rng import SplitMix64
from .sums import eval_S, eval_T, incomplete_linear_sum, incomplete_sums_all

LEVELS = ("quick", "full")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def check(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(message)
        elif not ok:
            self.failures.append("...")

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.notes.items())
        return f"[{status}] {self.name}: {self.checks} checks, {len(self.failures)} failures{extra}"


def primes_in(lo: int, hi: int) -> list[int]:
    return [n for n in range(lo, hi + 1) if is_prime(n)]


def random_poly(g: SplitMix64, d: int, ctx: FieldContext) -> PolySpec:
    coeffs = [g.randbelow(ctx.p) for _ in range(d)] + [g.randint(1, ctx.p - 1)]
    return PolySpec.from_coeffs(coeffs, ctx)


# ---------------------------------------------------------------------------
# field


def check_orthogonality(primes: Iterable[int]) -> SuiteResult:
    res = SuiteResult("field.orthogonality")
    for p in primes:
        ctx = FieldContext(p)
        z = np.arange(p)
        for c in range(1, p):
            s = ctx.roots[(c * z) % p].sum()
            res.check(abs(s) <= 1e-9 * p, f"p={p}: additive sum with c={c} is {s}")
        for chi in MultChar.all_nonprincipal(ctx):
            s = chi.table.sum()
            res.check(abs(s) <= 1e-9 * p, f"p={p}: character j={chi.j} sums to {s}")
        # convention check against an independent evaluation of exp(2 pi i z/p)
        for zz in (1, 2, p - 1, p + 3, -5):
            want = cmath.exp(2j * math.pi * (zz % p) / p)
            got = complex(ctx.roots[zz % p])
            res.check(abs(got - want) <= 1e-12, f"p={p}: e_p({zz}) = {got}, expected {want}")
    return res


def check_inverses_and_rho(primes: Iterable[int]) -> SuiteResult:
    res = SuiteResult("field.inverses_rho")
    for p in primes:
        ctx = FieldContext(p)
        for x in range(1, p):
            y = mod_inv(x, ctx)
            res.check(x * y % p == 1 and mod_inv(y, ctx) == x, f"p={p}: inverse of {x}")
            res.check(int(ctx.inverses[x]) == y, f"p={p}: inverse table at {x}")
        for a in range(-2 * p, 2 * p + 1):
            r = rho_int(a, ctx)
            res.check(r == rho_int(-a, ctx) == rho_int(a + p, ctx) and 2 * r <= p, f"p={p}: rho({a})")
        for k in range(p - 1):
            res.check(ctx.index(pow(ctx.g, k, p)) == k, f"p={p}: index of g^{k}")
    return res


def check_chi_multiplicative(primes: Iterable[int]) -> SuiteResult:
    res = SuiteResult("field.chi_multiplicative")
    for p in primes:
        ctx = FieldContext(p)
        xs = np.arange(1, p)
        prod_idx = np.outer(xs, xs) % p
        for chi in MultChar.all_nonprincipal(ctx):
            t = chi.table
            err = np.abs(t[prod_idx] - np.outer(t[1:], t[1:])).max()
            res.check(err <= 1e-9, f"p={p}, j={chi.j}: multiplicativity error {err}")
            res.check(t[0] == 0 and abs(t[1] - 1) <= 1e-12, f"p={p}, j={chi.j}: chi(0), chi(1)")
            res.check(np.abs(np.abs(t[1:]) - 1).max() <= 1e-12, f"p={p}, j={chi.j}: |chi| != 1")
            res.check(np.abs(t[1:] - 1).max() > 1e-6, f"p={p}, j={chi.j}: principal")
    return res


# ---------------------------------------------------------------------------
# regions


def random_polygon(g: SplitMix64, U: int, V: int) -> list[tuple[Fraction, Fraction]]:
    """Convex hull of a few random rational points in the box."""
    pts = set()
    n = g.randint(3, 8)
    while len(pts) < n:
        pts.add((Fraction(g.randbelow(4 * U + 1), 4), Fraction(g.randbelow(4 * V + 1), 4)))
    pts = sorted(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [(Fraction(0), Fraction(0)), (Fraction(U), Fraction(0)), (Fraction(0), Fraction(V))]
    return hull


def check_regions(trials: int, max_side: int = 64, seed: int = 7) -> SuiteResult:
    res = SuiteResult("regions.views")
    g = SplitMix64(seed)
    for _ in range(trials):
        U, V = g.randint(1, max_side), g.randint(1, max_side)
        reg = region_from_polygon(random_polygon(g, U, V), U, V)
        by_col = {(u, v) for u in range(1, U + 1) for v in range(reg.column_interval(u)[0] + 1, reg.column_interval(u)[1] + 1)}
        by_row = {(u, v) for v in range(1, V + 1) for u in range(reg.row_interval(v)[0] + 1, reg.row_interval(v)[1] + 1)}
        res.check(by_col == by_row, f"U={U}, V={V}: column and row views disagree")
        res.check(len(reg) == len(by_col), f"U={U}, V={V}: count mismatch")
        for axis, name in enumerate(("columns", "rows")):
            X, Y = getattr(reg, name)
            res.check(bool(np.all((0 <= X) & (X <= Y))), f"U={U}, V={V}: bad {name} interval")
            # a thin polygon may skip lattice lines; such a gap needs a real slice shorter than 1
            nonempty = np.flatnonzero(Y > X)
            for x in range(nonempty[0] + 1, nonempty[-1] + 2) if len(nonempty) else ():
                if Y[x - 1] > X[x - 1]:
                    continue
                seg = _slice(reg.vertices, Fraction(x), axis)
                res.check(seg is not None and seg[1] - seg[0] < 1, f"U={U}, V={V}: {name} gap at {x}")
    rect = region_rectangle(5, 7)
    as_poly = region_from_polygon([(0, 0), (5, 0), (5, 7), (0, 7)], 5, 7)
    for a, b in ((rect.columns, as_poly.columns), (rect.rows, as_poly.rows)):
        res.check(np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]), "rectangle as polygon differs")
    return res


# ---------------------------------------------------------------------------
# sums


def check_hard_bounds(instances: int, p_max: int = 499, seed: int = 2024) -> SuiteResult:
    """``|S| <= sqrt(d U V p)`` and ``|T| <= sqrt(2 d U V p)`` over full rectangles."""
    res = SuiteResult("sums.hard_bounds")
    g = SplitMix64(seed)
    primes = primes_in(5, p_max)
    worst_S = worst_T = 0.0
    for _ in range(instances):
        p = g.choice(primes)
        ctx = FieldContext(p)
        d = g.randint(1, 4)
        f = random_poly(g, d, ctx)
        U, V = g.randint(1, p - 1), g.randint(1, p - 1)
        A = weights_random(U, g.next_u64())
        B = weights_random(V, g.next_u64())
        reg = region_rectangle(U, V)
        s = eval_S(f, A, B, reg, ctx).abs
        bound_S = math.sqrt(d * U * V * p)
        res.check(s <= bound_S + 1e-6, f"p={p}, f={f.coeffs}, U={U}, V={V}: |S|={s} > {bound_S}")
        divs = [m for m in range(2, p) if (p - 1) % m == 0]
        m = g.choice(divs)
        chi = MultChar(ctx, m, g.randint(1, m - 1))
        t = eval_T(chi, f, A, B, reg, ctx).abs
        bound_T = math.sqrt(2 * d * U * V * p)
        res.check(t <= bound_T + 1e-6, f"p={p}, f={f.coeffs}, U={U}, V={V}: |T|={t} > {bound_T}")
        worst_S, worst_T = max(worst_S, s / bound_S), max(worst_T, t / bound_T)
    res.notes.update(max_ratio_S=round(worst_S, 4), max_ratio_T=round(worst_T, 4))
    return res


def check_incomplete_bound(primes: Iterable[int], samples: int = 200, seed: int = 5) -> SuiteResult:
    """``|sum_{X<v<=Y} e_p(alpha v)| <= min(Y-X, p/(2 rho(alpha)))`` for every alpha, X, Y."""
    res = SuiteResult("sums.incomplete_bound")
    g = SplitMix64(seed)
    for p in primes:
        ctx = FieldContext(p)
        X, Y = np.meshgrid(np.arange(p + 1), np.arange(p + 1), indexing="ij")
        valid = X <= Y
        for alpha in range(1, p):
            M = np.abs(incomplete_sums_all(alpha, ctx))
            cap = np.minimum(Y - X, p / (2 * rho_int(alpha, ctx)))
            bad = valid & (M > cap + 1e-9)
            res.checks += int(valid.sum()) - 1
            res.check(not bad.any(), f"p={p}, alpha={alpha}: {int(bad.sum())} violations")
        for _ in range(samples // 10 + 1):
            alpha, x = g.randint(1, p - 1), g.randint(0, p)
            y = g.randint(x, p)
            direct = incomplete_linear_sum(alpha, 1, x, y, ctx)
            batch = incomplete_sums_all(alpha, ctx)[x, y]
            res.check(abs(direct - batch) <= 1e-9 * p, f"p={p}: batch and direct sums differ")
    return res


def check_sum_identities(primes: Iterable[int], seed: int = 11) -> SuiteResult:
    """Additivity over vertical slices, K = S(aX+b), and the weight rewriting of T."""
    res = SuiteResult("sums.identities")
    g = SplitMix64(seed)
    for p in primes:
        ctx = FieldContext(p)
        U, V = g.randint(2, p - 1), g.randint(2, p - 1)
        reg = region_from_polygon(random_polygon(g, U, V), U, V)
        f = random_poly(g, g.randint(1, 3), ctx)
        A, B = weights_random(U, g.next_u64()), weights_random(V, g.next_u64())
        whole = eval_S(f, A, B, reg, ctx)
        cut = g.randint(1, U)
        parts = eval_S(f, A, B, reg.slice_columns(1, cut), ctx).value + eval_S(f, A, B, reg.slice_columns(cut + 1, U), ctx).value
        res.check(abs(whole.value - parts) <= 1e-9 * max(whole.terms, 1), f"p={p}: slice additivity")
        a, b = g.randint(1, p - 1), g.randint(0, p - 1)
        from .sums import eval_K

        k = eval_K(a, b, A, B, reg, ctx)
        s = eval_S(PolySpec.linear(a, b, ctx), A, B, reg, ctx)
        res.check(k == s, f"p={p}: K and S(aX+b) differ")
        chi = MultChar.quadratic(ctx)
        t = eval_T(chi, f, A, B, reg, ctx).value
        # T = sum alpha_u chi(f(u)) beta_v chi(v/f(u) + 1) when f has no zero on the summed u
        total, ok = 0j, True
        for u, v in reg.points():
            fu = f(u)
            if fu == 0:
                ok = False
                break
            total += A[u - 1] * chi(fu) * B[v - 1] * chi(v * mod_inv(fu, ctx) + 1)
        if ok:
            res.check(abs(t - total) <= 1e-9 * max(len(reg), 1), f"p={p}: T rewriting differs")
    return res


def check_complete_sums(primes: Iterable[int]) -> SuiteResult:
    """``S(f=X, unit, (p-1)x(p-1)) = -(p-1)`` and ``T`` over complete ranges is 0."""
    res = SuiteResult("sums.complete")
    for p in primes:
        ctx = FieldContext(p)
        s = eval_S(PolySpec.linear(1, 0, ctx), weights_unit(p - 1), weights_unit(p - 1), region_rectangle(p - 1, p - 1), ctx)
        res.check(abs(s.value + (p - 1)) <= 1e-6, f"p={p}: S = {s.value}")
        for chi in (MultChar.quadratic(ctx), MultChar(ctx, p - 1, 1)):
            for f in (PolySpec.linear(1, 0, ctx), PolySpec.from_coeffs([1, 0, 1], ctx)):
                t = eval_T(chi, f, weights_unit(p), weights_unit(p), region_rectangle(p, p), ctx)
                res.check(abs(t.value) <= 1e-6 * p, f"p={p}, m={chi.m}: T = {t.value}")
    return res


# ---------------------------------------------------------------------------
# counting


def check_J_oracle(primes: Iterable[int], ds: Sequence[int], ks: Sequence[int], Ts: Sequence[int],
                   pairs: Sequence[tuple[int, int]]) -> SuiteResult:
    res = SuiteResult("counting.J_oracle")
    for p, d, k, T, (a, b) in itertools.product(primes, ds, ks, Ts, pairs):
        ctx = FieldContext(p)
        naive = count_J_naive(d, k, a, b, T, ctx).count
        conv = count_J_conv(d, k, a, b, T, ctx).count
        res.check(naive == conv, f"p={p}, d={d}, k={k}, T={T}, (a,b)=({a},{b}): naive {naive} != conv {conv}")
    return res


def check_tuples_oracle(primes: Iterable[int], Us: Sequence[int], Vs: Sequence[int], Ls: Sequence[int],
                        seqs_per_cell: int = 3, seed: int = 31) -> SuiteResult:
    res = SuiteResult("counting.tuples_oracle")
    g = SplitMix64(seed)
    skipped = 0
    for p, U, V, L in itertools.product(primes, Us, Vs, Ls):
        ctx = FieldContext(p)
        try:
            n_primes = len(prime_set(L, ctx))
        except EmptyPrimeSet:
            skipped += 1
            continue
        seqs = [[pow(u, 3, p) for u in range(1, U + 1)]]
        seqs += [[g.randbelow(p) for _ in range(U)] for _ in range(seqs_per_cell)]
        for r in seqs:
            hist = count_I_lambda(r, L, V, ctx)
            res.check(hist.mass == n_primes * U * V, f"p={p}, r={r}, L={L}, V={V}: I mass {hist.mass}")
            n = count_N_tuples(r, L, V, ctx).count
            direct = count_N_tuples_direct(r, L, V, ctx)
            res.check(n == direct, f"p={p}, r={r}, L={L}, V={V}: N={n}, direct {direct}")
            res.check(n >= n_primes * U * V, f"p={p}, r={r}: N below the diagonal count")
    res.notes["skipped_cells"] = skipped
    return res


def check_moment_identity(primes: Iterable[int]) -> SuiteResult:
    """``sum_lam |sum_{k<=K} chi(lam+k)|^2 = K(p-K)`` for every nonprincipal chi and K."""
    res = SuiteResult("counting.moment_identity")
    for p in primes:
        ctx = FieldContext(p)
        for chi in MultChar.all_nonprincipal(ctx):
            for K in range(1, p):
                got, want = char_moment(chi, K, 1, ctx), K * (p - K)
                res.check(abs(got - want) <= 1e-6 * want, f"p={p}, j={chi.j}, K={K}: {got} != {want}")
    return res


def check_N_oracle(primes: Iterable[int], samples: int, seed: int = 17) -> SuiteResult:
    """count_N against the (u, z) box, and the Weil-type deviation for f = X."""
    res = SuiteResult("counting.N_oracle")
    g = SplitMix64(seed)
    worst = 0.0
    for p in primes:
        ctx = FieldContext(p)
        weil = math.sqrt(p) * math.log(p) ** 2
        for _ in range(samples):
            f = random_poly(g, g.randint(1, 3), ctx)
            U, Z = g.randint(1, p - 1), g.randint(1, p - 1)
            res.check(count_N(f, U, Z, ctx).count == count_N_brute(f, U, Z, ctx), f"p={p}, f={f.coeffs}, U={U}, Z={Z}")
            lin = PolySpec.linear(1, 0, ctx)
            dev = abs(count_N(lin, U, Z, ctx).count - U * Z / p)
            worst = max(worst, dev / weil)
            res.check(dev <= 10 * weil, f"p={p}, U={U}, Z={Z}: Weil deviation {dev}")
    res.notes["max_weil_ratio"] = round(worst, 4)
    return res


def check_rho_census(primes: Iterable[int], per_prime: int, seed: int = 23) -> SuiteResult:
    res = SuiteResult("counting.rho_census")
    g = SplitMix64(seed)
    for p in primes:
        ctx = FieldContext(p)
        for _ in range(per_prime):
            f = random_poly(g, g.randint(1, 4), ctx)
            U, V = g.randint(1, p - 1), g.randint(1, p)
            c = rho_census(f, U, V, ctx)
            res.check(c.total == U, f"p={p}, f={f.coeffs}, U={U}, V={V}: partition {c.total} != {U}")
            res.check(c.prelim_sum <= c.dyadic_bound + 1e-9, f"p={p}, f={f.coeffs}: dyadic bound below the sum")
    return res


# ---------------------------------------------------------------------------
# pigeonhole


def check_pigeonhole(primes: Iterable[int], ds: Sequence[int], tuples: int, seed: int = 41) -> SuiteResult:
    """Random coefficient tuples with targets ``T_i = p^{x_i}``, ``sum x_i = d``."""
    res = SuiteResult("pigeonhole.existence")
    g = SplitMix64(seed)
    worst = 0.0
    for p in primes:
        ctx = FieldContext(p)
        for d in ds:
            for _ in range(tuples):
                a = [g.randbelow(p) for _ in range(d + 1)]
                w = [g.random() + 0.05 for _ in range(d + 1)]
                x = [d * wi / sum(w) for wi in w]
                if max(x) >= 1:  # keep every T_i < p
                    x = [d / (d + 1)] * (d + 1)
                T = [p**xi for xi in x]
                if math.prod(math.ceil(t) for t in T) < p**d:
                    continue
                r = find_t(a, T, ctx)
                res.check(r.c <= 2, f"p={p}, a={a}, T={T}: c={r.c}")
                res.check(
                    all(r.per_i[i] == rho_int(a[i] * r.t, ctx) for i in range(d + 1)),
                    f"p={p}, a={a}: per_i inconsistent with rho_int",
                )
                worst = max(worst, r.c)
            for U in range(1, p):
                if U ** (d * (d + 1)) >= p * p:
                    break
                W, T = canonical_targets(d, U, ctx)
                res.check(abs(math.prod(T) / p**d - 1) <= 1e-9, f"p={p}, d={d}, U={U}: prod T_i != p^d")
    res.notes["max_c"] = round(worst, 6)
    return res


# ---------------------------------------------------------------------------
# bounds


def check_bounds() -> SuiteResult:
    res = SuiteResult("bounds.calculus")
    for problem in bounds.check_published_table():
        res.check(False, problem)
    res.checks += 1
    grid = [Fraction(i, 40) for i in range(41)]
    fns: list[tuple[str, Callable]] = [
        ("trivial_bilinear", bounds.exp_trivial_bilinear),
        ("Kmix1", bounds.exp_thm_Kmix1),
        ("Kmix2", bounds.exp_thm_Kmix2),
        ("K_pure", bounds.exp_K_pure),
        ("K_zero", bounds.exp_K_zero),
    ]
    fns += [(f"S_pure(d={d})", lambda a, b, d=d: bounds.exp_thm_S_pure(d, a, b)) for d in (1, 2, 3, 4)]
    fns += [(f"cor_slice(d={d})", lambda a, b, d=d: bounds.exp_cor_slice(d, a, b)) for d in (2, 3, 4)]
    fns += [(f"Sabd(k={k})", lambda a, b, k=k: bounds.exp_thm_Sabd(k, a, b)) for k in (1, 2, 6, 15)]
    for name, fn in fns:
        vals = [[fn(a, b) for b in grid] for a in grid]
        ok = all(vals[i][j] <= vals[i + 1][j] for i in range(40) for j in range(41))
        ok &= all(vals[i][j] <= vals[i][j + 1] for i in range(41) for j in range(40))
        res.check(ok, f"{name} is not monotone on the 1/40 grid")
    for a, b in bounds.PUBLISHED_ROWS:
        res.check(bounds.optimal_k(a, b, 64) == bounds.optimal_k(a, b, 256), f"({a},{b}): optimum moves past k=64")
        stars = sum(r.winner for r in bounds.bound_rows(a, b))
        res.check(stars == 1, f"({a},{b}): {stars} winners")
    return res


# ---------------------------------------------------------------------------


def suites(level: str) -> list[Callable[[], SuiteResult]]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    full = level == "full"
    small = primes_in(5, 101 if full else 31)
    return [
        lambda: check_orthogonality(small),
        lambda: check_inverses_and_rho(small),
        lambda: check_chi_multiplicative(small),
        lambda: check_regions(200 if full else 20),
        lambda: check_complete_sums([11, 101, 1009] if full else [11, 101]),
        lambda: check_hard_bounds(200 if full else 20, 499 if full else 101),
        lambda: check_incomplete_bound(small),
        lambda: check_sum_identities(small),
        lambda: check_J_oracle([7, 11, 13], [1, 2, 3], [1, 2], range(1, 7), [(1, 0), (1, 1), (2, 3)])
        if full
        else check_J_oracle([7, 11], [1, 2], [1, 2], range(1, 5), [(1, 0), (2, 3)]),
        lambda: check_tuples_oracle(primes_in(5, 31), [1, 2, 3, 4], [1, 2, 3, 4], [2, 3])
        if full
        else check_tuples_oracle([7, 11], [1, 2, 3], [1, 2, 3], [2, 3], seqs_per_cell=1),
        lambda: check_moment_identity([5, 7, 11, 13, 101] if full else [5, 7, 11, 13]),
        lambda: check_N_oracle(small, 10 if full else 3),
        lambda: check_rho_census(small, 10 if full else 3),
        lambda: check_pigeonhole(primes_in(11, 97) if full else [11, 13, 17], [1, 2, 3], 50 if full else 10),
        check_bounds,
    ]


def run(level: str = "quick", report: Callable[[str], None] = print) -> bool:
    ok = True
    for suite in suites(level):
        res = suite()
        report(res.summary())
        for msg in res.failures:
            report(f"    {msg}")
        ok &= res.passed
    return ok
