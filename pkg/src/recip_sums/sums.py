"""Direct evaluation of bilinear exponential, Kloosterman and character sums.

Terms are generated in lexicographic ``(u, v)`` order and reduced with
numpy's pairwise summation, so a fixed input always yields the same bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadDegree, DegreeTooSmall, WeightTooShort, ZeroDenominator, ZeroLeadingCoeff
from .field import FieldContext, MultChar, PolySpec
from .regions import ConvexRegion, WeightSeq, weights_unit

# Terms are reduced in blocks of this many; block sums are then reduced pairwise.
BLOCK = 1 << 22


@dataclass(frozen=True)
class SumResult:
    value: complex
    terms: int
    excluded: int
    trivial_bound: float
    benchmark: float

    @property
    def abs(self) -> float:
        return abs(self.value)


def _pairwise_sum(chunks: list[np.ndarray]) -> complex:
    if not chunks:
        return 0j
    flat = np.concatenate(chunks)
    if len(flat) <= BLOCK:
        return complex(flat.sum())
    partial = np.array([flat[i : i + BLOCK].sum() for i in range(0, len(flat), BLOCK)])
    return complex(partial.sum())


def _check_weights(A: WeightSeq, B: WeightSeq | None, region: ConvexRegion) -> None:
    if len(A) < region.U:
        raise WeightTooShort(f"need {region.U} u-weights, got {len(A)}")
    if B is not None and len(B) < region.V:
        raise WeightTooShort(f"need {region.V} v-weights, got {len(B)}")


def _result(value, terms, excluded, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    UV = float(region.U) * float(region.V)
    return SumResult(value, terms, excluded, UV, math.sqrt(UV * ctx.p))


def eval_S(f: PolySpec, A: WeightSeq, B: WeightSeq, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    """``sum alpha_u beta_v e_p(v / f(u))`` over the region, zeros of f skipped."""
    if f.d < 1:
        raise BadDegree("S_f needs a polynomial of degree >= 1")
    _check_weights(A, B, region)
    p = ctx.p
    X, Y = region.columns
    us = np.arange(1, region.U + 1)
    fu = f.eval_many(us)
    inv = ctx.inverses[fu]
    roots, a, b = ctx.roots, A.values, B.values
    chunks, terms, excluded = [], 0, 0
    for i in range(region.U):
        x, y = int(X[i]), int(Y[i])
        if x >= y:
            continue
        if fu[i] == 0:
            excluded += 1
            continue
        vs = np.arange(x + 1, y + 1, dtype=np.int64)
        chunks.append(a[i] * (b[x:y] * roots[(vs * int(inv[i])) % p]))
        terms += y - x
    return _result(_pairwise_sum(chunks), terms, excluded, region, ctx)


def eval_T(chi: MultChar, f: PolySpec, A: WeightSeq, B: WeightSeq, region: ConvexRegion,
           ctx: FieldContext) -> SumResult:
    """``sum alpha_u beta_v chi(v + f(u))`` over the region; ``chi(0) = 0``."""
    _check_weights(A, B, region)
    p = ctx.p
    X, Y = region.columns
    fu = f.eval_many(np.arange(1, region.U + 1))
    table, a, b = chi.table, A.values, B.values
    chunks, terms = [], 0
    for i in range(region.U):
        x, y = int(X[i]), int(Y[i])
        if x >= y:
            continue
        vs = np.arange(x + 1, y + 1, dtype=np.int64)
        chunks.append(a[i] * (b[x:y] * table[(vs + int(fu[i])) % p]))
        terms += y - x
    return _result(_pairwise_sum(chunks), terms, 0, region, ctx)


def eval_K(a: int, b: int, A: WeightSeq, B: WeightSeq, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    if a % ctx.p == 0:
        raise ZeroLeadingCoeff("K_{a,b} needs a != 0 mod p")
    return eval_S(PolySpec.linear(a, b, ctx), A, B, region, ctx)


def eval_S_single(f: PolySpec, A: WeightSeq, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    return eval_S(f, A, weights_unit(region.V), region, ctx)


def eval_T_single(chi: MultChar, f: PolySpec, A: WeightSeq, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    return eval_T(chi, f, A, weights_unit(region.V), region, ctx)


def eval_K_single(a: int, b: int, A: WeightSeq, region: ConvexRegion, ctx: FieldContext) -> SumResult:
    return eval_K(a, b, A, weights_unit(region.V), region, ctx)


def incomplete_linear_sum(num: int, den: int, X: int, Y: int, ctx: FieldContext) -> complex:
    """``sum_{v=X+1}^{Y} e_p(alpha v)`` with ``alpha = num/den mod p``."""
    p = ctx.p
    if den % p == 0:
        raise ZeroDenominator(f"denominator {den} is divisible by {p}")
    if not 0 <= X <= Y <= p:
        raise ValueError(f"need 0 <= X <= Y <= p, got X={X}, Y={Y}")
    alpha = num * pow(den, -1, p) % p
    vs = np.arange(X + 1, Y + 1, dtype=np.int64)
    return complex(ctx.roots[(alpha * vs) % p].sum())


def incomplete_sums_all(alpha: int, ctx: FieldContext) -> np.ndarray:
    """Matrix ``M[X, Y] = sum_{v=X+1}^{Y} e_p(alpha v)`` for all ``0 <= X, Y <= p``.

    Built from running sums of the same terms; only entries with ``X <= Y``
    are meaningful.
    """
    p = ctx.p
    terms = ctx.roots[(alpha * np.arange(1, p + 1)) % p]
    prefix = np.concatenate([[0j], np.cumsum(terms)])
    return prefix[None, :] - prefix[:, None]


def weyl_sum(f: PolySpec, U: int, ctx: FieldContext) -> complex:
    """``sum_{u=1}^{U} e_p(f(u))``."""
    if U < 1:
        return 0j
    return complex(ctx.roots[f.eval_many(np.arange(1, U + 1))].sum())


def wooley_bound(d: int, U: float, ctx: FieldContext) -> float:
    """``U (1/U + p U^{-d})^sigma`` with ``sigma = 1/(2(d-1)(d-2))``; no implied constant."""
    if d < 3:
        raise DegreeTooSmall(f"the Weyl-sum bound needs d >= 3, got {d}")
    sigma = 1.0 / (2 * (d - 1) * (d - 2))
    return U * (1.0 / U + ctx.p * U ** (-d)) ** sigma
