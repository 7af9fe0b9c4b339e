"""Simultaneous small multiples: find a unit ``t`` making every ``a_i t``
small modulo p, and use it to shrink polynomial coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import caps
from .errors import PreconditionFailed, RangeTooLarge
from .field import FieldContext, PolySpec, rho_array


@dataclass(frozen=True)
class ReductionResult:
    t: int
    c: float  # max_i rho(a_i t) / T_i
    per_i: tuple[int, ...]
    guarantee_applies: bool  # prod T_i > p^d


def find_t(a: Sequence[int], T: Sequence[float], ctx: FieldContext) -> ReductionResult:
    """Exhaustive search over ``t in [1, p-1]`` for the smallest quality
    ``c = max_i rho(a_i t)/T_i``; ties go to the smallest t."""
    p = ctx.p
    if len(a) != len(T) or not a:
        raise PreconditionFailed("need one target per coefficient")
    if len(a) > caps.cap("coeffs"):
        raise RangeTooLarge(f"{len(a)} coefficients exceed the cap {caps.cap('coeffs')}")
    if any(not 1 <= x < p for x in T):
        raise PreconditionFailed(f"targets must satisfy 1 <= T_i < p, got {list(T)}")
    ts = np.arange(1, p, dtype=np.int64)
    quality = np.zeros(p - 1)
    for ai, Ti in zip(a, T):
        np.maximum(quality, rho_array((ai % p) * ts, p) / Ti, out=quality)
    best = int(np.argmin(quality))  # first occurrence = smallest t
    t = best + 1
    per_i = tuple(int(min(ai * t % p, p - ai * t % p)) for ai in a)
    d = len(a) - 1
    guarantee = math.fsum(math.log(x) for x in T) > d * math.log(p)
    return ReductionResult(t, float(quality[best]), per_i, guarantee)


def canonical_targets(d: int, U: int, ctx: FieldContext) -> tuple[float, list[float]]:
    """``W = p^{d/(d+1)} U^{d/2}`` and ``T_i = W / U^i`` for ``i = 0..d``.

    Requires ``U^{d/2} < p^{1/(d+1)}``, checked exactly as ``U^{d(d+1)} < p^2``.
    """
    p = ctx.p
    if d < 1 or not 1 <= U < p:
        raise PreconditionFailed(f"need d >= 1 and 1 <= U < p, got d={d}, U={U}")
    if U ** (d * (d + 1)) >= p * p:
        raise PreconditionFailed(f"U^(d/2) < p^(1/(d+1)) fails for d={d}, U={U}, p={p}")
    W = p ** (d / (d + 1)) * U ** (d / 2)
    T = [W / U**i for i in range(d + 1)]
    if not (1 <= T[-1] and all(T[i + 1] <= T[i] for i in range(d)) and T[0] < p):
        raise PreconditionFailed(f"targets out of order: {T}")
    log_prod = math.fsum(math.log(x) for x in T)
    if abs(log_prod - d * math.log(p)) > 1e-9 * max(1.0, d * math.log(p)):
        raise PreconditionFailed("targets do not multiply to p^d")
    return W, T


@dataclass(frozen=True)
class ShrunkenPoly:
    coeffs: tuple[int, ...]  # b_0..b_d with b_i = a_i t mod p, |b_i| < p/2
    t: int
    W: float
    targets: tuple[float, ...]
    c: float  # max_i |b_i| / T_i

    def __call__(self, x: int) -> int:
        """Integer value of ``g(x)`` (no reduction)."""
        acc = 0
        for b in reversed(self.coeffs):
            acc = acc * x + b
        return acc


def _signed(x: int, p: int) -> int:
    x %= p
    return x - p if x > p // 2 else x


def shrink_poly(f: PolySpec, U: int, ctx: FieldContext) -> ShrunkenPoly:
    W, T = canonical_targets(f.d, U, ctx)
    res = find_t(f.coeffs, T, ctx)
    b = tuple(_signed(ai * res.t, ctx.p) for ai in f.coeffs)
    c = max(abs(bi) / Ti for bi, Ti in zip(b, T))
    return ShrunkenPoly(b, res.t, W, tuple(T), c)
