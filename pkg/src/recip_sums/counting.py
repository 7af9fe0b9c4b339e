"""Exact counters for congruence solutions, character-sum moments and
residue censuses.

Every ``CountReport.bound_rhs`` is the corresponding upper bound with all
``p^{o(1)}`` factors and implied constants dropped, so ``ratio`` is a trend
diagnostic rather than something that must stay below 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import caps
from .errors import EmptyPrimeSet, RangeTooLarge, RecipSumsError
from .field import FieldContext, MultChar, PolySpec, rho_array


@dataclass(frozen=True)
class CountReport:
    count: int
    bound_rhs: float
    ratio: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ratio", self.count / self.bound_rhs)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Counts indexed by field element: ``counts[x]`` for ``0 <= x < p``."""

    counts: np.ndarray

    @property
    def mass(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, x: int) -> int:
        return int(self.counts[x])

    def as_dict(self) -> dict[int, int]:
        return {int(x): int(self.counts[x]) for x in np.flatnonzero(self.counts)}

    def energy(self) -> int:
        """``sum_x counts[x]**2`` in exact integer arithmetic."""
        return sum(int(c) * int(c) for c in self.counts[self.counts != 0])


# ---------------------------------------------------------------------------
# alternating reciprocal congruences J_{d,k}(a,b;T)


def _reciprocal_powers(d: int, a: int, b: int, T: int, ctx: FieldContext) -> list[int]:
    """``(a t + b)^{-d} mod p`` for ``t = 1..T``, skipping t with ``a t + b = 0``."""
    p = ctx.p
    out = []
    for t in range(1, T + 1):
        x = (a * t + b) % p
        if x:
            out.append(pow(x, -d, p))
    return out


def _check_J_args(d: int, k: int, a: int, T: int, ctx: FieldContext) -> None:
    if a % ctx.p == 0:
        raise RecipSumsError("J_{d,k} needs a != 0 mod p")
    if d < 1 or k < 1:
        raise RecipSumsError("J_{d,k} needs d >= 1 and k >= 1")
    if not 1 <= T < ctx.p:
        raise RecipSumsError(f"need 1 <= T < p, got T={T}")


def J_bound_rhs(d: int, k: int, T: int, p: int) -> float:
    if d == 1 and k == 2:
        return T**3.5 / math.sqrt(p) + T**2
    return T ** (2 * k) / p + T ** (2 * k * k / (k + 1))


def count_J_naive(d: int, k: int, a: int, b: int, T: int, ctx: FieldContext) -> CountReport:
    """Enumerate every 2k-tuple and test the alternating sum directly."""
    _check_J_args(d, k, a, T, ctx)
    limit = caps.cap("naive")
    if T ** (2 * k) > limit:
        raise RangeTooLarge(f"T^(2k) = {T}^{2 * k} exceeds the naive cap {limit}")
    p = ctx.p
    w = _reciprocal_powers(d, a, b, T, ctx)
    count = 0
    if w:
        last = np.array(w, dtype=np.int64)
        signs = [(-1) ** j for j in range(1, 2 * k)]
        for prefix in itertools.product(w, repeat=2 * k - 1):
            s = sum(sg * x for sg, x in zip(signs, prefix))
            # position 2k carries sign +1
            count += int(np.count_nonzero((s + last) % p == 0))
    return CountReport(count, J_bound_rhs(d, k, T, p))


def reciprocal_histogram(d: int, a: int, b: int, T: int, ctx: FieldContext) -> Histogram:
    w = _reciprocal_powers(d, a, b, T, ctx)
    return Histogram(np.bincount(np.array(w, dtype=np.int64), minlength=ctx.p).astype(np.int64))


def cyclic_convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exact cyclic convolution, looping over the support of ``y``."""
    dtype = object if x.dtype == object or y.dtype == object else np.int64
    out = np.zeros(len(x), dtype=dtype)
    for s in np.flatnonzero(y):
        out = out + int(y[s]) * np.roll(x, int(s))
    return out


def count_J_conv(d: int, k: int, a: int, b: int, T: int, ctx: FieldContext) -> CountReport:
    """``J = sum_x R_k(x)^2`` where ``R_k`` is the k-fold cyclic convolution power
    of the histogram of ``(a t + b)^{-d}``."""
    _check_J_args(d, k, a, T, ctx)
    limit = caps.cap("conv")
    if ctx.p > limit:
        raise RangeTooLarge(f"p = {ctx.p} exceeds the convolution cap {limit}")
    R1 = reciprocal_histogram(d, a, b, T, ctx).counts
    if T ** (2 * k) >= 2**62:
        R1 = R1.astype(object)
    R = R1
    for _ in range(k - 1):
        R = cyclic_convolve(R, R1)
    return CountReport(Histogram(R).energy(), J_bound_rhs(d, k, T, ctx.p))


# ---------------------------------------------------------------------------
# multiplicative congruences N_f(U,Z)


def N_bound_rhs(d: int, U: int, Z: int, p: int) -> float:
    return U ** (d / 2) * Z * p ** (-1 / (d + 1)) + 1


def count_N(f: PolySpec, U: int, Z: int, ctx: FieldContext) -> CountReport:
    """Solutions of ``f(u) z = 1`` with ``1 <= u <= U``, ``1 <= z <= Z``, in O(U)."""
    if U < 1 or Z < 1:
        return CountReport(0, N_bound_rhs(f.d, max(U, 0), max(Z, 0), ctx.p))
    fu = f.eval_many(np.arange(1, U + 1))
    z = ctx.inverses[fu]
    hit = (fu != 0) & (z >= 1) & (z <= Z)
    return CountReport(int(np.count_nonzero(hit)), N_bound_rhs(f.d, U, Z, ctx.p))


def count_N_brute(f: PolySpec, U: int, Z: int, ctx: FieldContext) -> int:
    """Reference count over the whole ``(u, z)`` box."""
    p = ctx.p
    zs = np.arange(1, Z + 1, dtype=np.int64)
    return sum(int(np.count_nonzero(f(u) * zs % p == 1)) for u in range(1, U + 1))


# ---------------------------------------------------------------------------
# the I(lambda) census and the 6-tuple count N


def primes_between(lo: int, hi: int) -> list[int]:
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [n for n in range(max(lo, 2), hi + 1) if sieve[n]]


def prime_set(L: int, ctx: FieldContext) -> list[int]:
    """Primes in ``[L, 2L]``; all of them must be invertible mod p."""
    if L < 2:
        raise EmptyPrimeSet(f"need L >= 2, got {L}")
    ps = primes_between(L, 2 * L)
    if not ps:
        raise EmptyPrimeSet(f"no prime in [{L}, {2 * L}]")
    if any(q % ctx.p == 0 for q in ps):
        raise EmptyPrimeSet(f"[{L}, {2 * L}] contains p = {ctx.p}, which is not invertible")
    return ps


def count_I_lambda(r: Sequence[int], L: int, V: int, ctx: FieldContext) -> Histogram:
    """``I(lam) = #{(l, u, v) : (v + r_u) / l = lam}`` over primes l in [L, 2L]."""
    p = ctx.p
    base = (np.arange(1, V + 1, dtype=np.int64)[None, :] + np.asarray(r, dtype=np.int64)[:, None] % p) % p
    counts = np.zeros(p, dtype=np.int64)
    for q in prime_set(L, ctx):
        counts += np.bincount(((base * int(ctx.inverses[q % p])) % p).ravel(), minlength=p)
    return Histogram(counts)


def count_N_tuples(r: Sequence[int], L: int, V: int, ctx: FieldContext) -> CountReport:
    """``N = sum_lam I(lam)^2``; reference ``L U^2 V`` (decay exponent set to 0)."""
    U = len(r)
    return CountReport(count_I_lambda(r, L, V, ctx).energy(), float(L * U * U * V))


def count_N_tuples_direct(r: Sequence[int], L: int, V: int, ctx: FieldContext) -> int:
    """Enumerate ``(l1, l2, u1, u2, v1, v2)`` and test ``(v1 + r_u1) l2 = (v2 + r_u2) l1``."""
    p = ctx.p
    ls = prime_set(L, ctx)
    U = len(r)
    limit = caps.cap("tuples")
    if (len(ls) * U * V) ** 2 > limit:
        raise RangeTooLarge(f"{(len(ls) * U * V) ** 2} tuples exceed the cap {limit}")
    count = 0
    for l1, l2 in itertools.product(ls, repeat=2):
        for u1, u2 in itertools.product(range(U), repeat=2):
            for v1, v2 in itertools.product(range(1, V + 1), repeat=2):
                if ((v1 + r[u1]) * l2 - (v2 + r[u2]) * l1) % p == 0:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# moments of short character sums


def char_moment(chi: MultChar, K: int, nu: int, ctx: FieldContext) -> float:
    """``sum_lam |sum_{k=1}^{K} chi(lam + k)|^{2 nu}`` over all of F_p."""
    p = ctx.p
    if not 1 <= K < p or nu < 1:
        raise RecipSumsError(f"need 1 <= K < p and nu >= 1, got K={K}, nu={nu}")
    t = chi.table
    prefix = np.concatenate([[0j], np.cumsum(np.concatenate([t, t]))])
    lam = np.arange(p)
    windows = prefix[lam + K + 1] - prefix[lam + 1]
    return float(np.sum(np.abs(windows) ** (2 * nu)))


def char_moment_bound(K: int, nu: int, p: int) -> float:
    return K ** (2 * nu) * math.sqrt(p) + K**nu * p


# ---------------------------------------------------------------------------
# dyadic census of rho(1/f(u))


@dataclass(frozen=True)
class RhoCensus:
    R: int
    Q: dict[int, int]
    I: int
    J: int
    excluded: int
    prelim_sum: float  # sum_u min(V, p / rho(1/f(u)))
    dyadic_bound: float  # V R + p sum_j Q_j e^{-j}

    @property
    def total(self) -> int:
        return self.R + sum(self.Q.values()) + self.excluded


def rho_census(f: PolySpec, U: int, V: int, ctx: FieldContext) -> RhoCensus:
    """Split ``u <= U`` by the size of ``rho(1/f(u))`` on the natural-log scale.

    ``R`` counts ``rho < e^I`` and ``Q[j]`` counts ``e^j <= rho < e^{j+1}`` for
    ``I <= j <= J`` with ``I = floor(log(2p/V))``, ``J = floor(log 2p)``.
    """
    p = ctx.p
    if not 1 <= V <= p:
        raise RecipSumsError(f"need 1 <= V <= p, got V={V}")
    I = math.floor(math.log(2 * p / V))
    J = math.floor(math.log(2 * p))
    fu = f.eval_many(np.arange(1, U + 1))
    nz = fu != 0
    rho = rho_array(ctx.inverses[fu[nz]], p)
    R = int(np.count_nonzero(rho < math.exp(I)))
    Q = {}
    for j in range(I, J + 1):
        Q[j] = int(np.count_nonzero((rho >= math.exp(j)) & (rho < math.exp(j + 1))))
    prelim = float(np.minimum(V, p / rho).sum()) if len(rho) else 0.0
    bound = V * R + p * sum(q * math.exp(-j) for j, q in Q.items())
    return RhoCensus(R, Q, I, J, int(np.count_nonzero(~nz)), prelim, bound)


# ---------------------------------------------------------------------------
# equidistribution of a sequence modulo p


def discrepancy(r: Sequence[int], ctx: FieldContext) -> float:
    """``max_{b, 1<=Z<p} |#{(u,z) : r_u = b + z} - U Z / p| / U``.

    With ``P`` the prefix counts of the sorted residues, the deviation for
    ``(b, Z)`` is ``F(b+Z+1) - F(b+1)`` where ``F(i) = P(i) - U i / p`` is
    p-periodic, so the maximum is ``max F - min F`` over one period.
    """
    p = ctx.p
    r = np.sort(np.asarray(r, dtype=np.int64) % p)
    U = len(r)
    if U == 0:
        raise RecipSumsError("discrepancy needs a nonempty sequence")
    i = np.arange(p, dtype=np.int64)
    P = np.searchsorted(r, i, side="left")  # #{u : r_u < i}
    scaled = p * P - U * i  # p * F(i), exact integers
    return float(scaled.max() - scaled.min()) / (p * U)


def discrepancy_brute(r: Sequence[int], ctx: FieldContext) -> float:
    """Direct maximisation over every shift ``b`` and length ``Z``."""
    p = ctx.p
    r = np.asarray(r, dtype=np.int64) % p
    U = len(r)
    best = 0.0
    for b in range(p):
        offs = (r - b) % p  # z = r_u - b must lie in [1, Z]
        cnt = np.cumsum(np.bincount(offs, minlength=p))  # cnt[Z] = #{offs <= Z}
        for Z in range(1, p):
            hits = cnt[Z] - cnt[0]
            best = max(best, abs(hits - U * Z / p) / U)
    return best
