"""Prime field arithmetic, additive and multiplicative characters.

Field elements are plain Python ints in ``[0, p)``.  Complex values are
Python ``complex`` (double precision); array-valued helpers return numpy
arrays so that the summation layer can gather terms without Python loops.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    BadCharacter,
    BadPolynomial,
    NotPrime,
    ZeroDenominator,
    ZeroInverse,
)

TWO_PI_I = 2j * math.pi

DEFAULT_INDEX_TABLE_CAP = 10**5


def is_prime(n: int) -> bool:
    """Trial division; fine for the desk-scale moduli used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod the prime ``p``."""
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise NotPrime(f"{p} has no primitive root")


@dataclass(frozen=True)
class FieldContext:
    """An odd prime ``p`` with its smallest primitive root ``g``.

    The discrete-log table ``ind`` is built only when ``p <= index_table_cap``;
    above the cap :meth:`index` falls back to baby-step giant-step.
    """

    p: int
    index_table_cap: int = DEFAULT_INDEX_TABLE_CAP
    g: int = field(init=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p < 5 or not is_prime(p):
            raise NotPrime(f"modulus must be a prime >= 5, got {p!r}")
        object.__setattr__(self, "g", primitive_root(p))

    @cached_property
    def powers(self) -> np.ndarray:
        """``powers[k] = g**k mod p`` for ``0 <= k < p-1``."""
        p, g = self.p, self.g
        out = np.empty(p - 1, dtype=np.int64)
        x = 1
        for k in range(p - 1):
            out[k] = x
            x = x * g % p
        return out

    @cached_property
    def ind(self) -> np.ndarray | None:
        if self.p > self.index_table_cap:
            return None
        table = np.full(self.p, -1, dtype=np.int64)
        table[self.powers] = np.arange(self.p - 1, dtype=np.int64)
        return table

    @cached_property
    def roots(self) -> np.ndarray:
        """``roots[z] = e_p(z)`` for ``0 <= z < p``."""
        return np.exp(TWO_PI_I * np.arange(self.p) / self.p)

    @cached_property
    def inverses(self) -> np.ndarray:
        """``inverses[x] = x^{-1} mod p``; entry 0 is 0 by convention."""
        p = self.p
        inv = np.zeros(p, dtype=np.int64)
        pw = self.powers
        # g^{-k} = g^{p-1-k}
        inv[pw] = pw[(-np.arange(p - 1)) % (p - 1)]
        return inv

    def index(self, x: int) -> int:
        """Discrete logarithm of ``x`` to base ``g``."""
        x %= self.p
        if x == 0:
            raise ZeroInverse("index of 0 is undefined")
        table = self.ind
        if table is not None:
            return int(table[x])
        return _bsgs(self.g, x, self.p)


def _bsgs(g: int, x: int, p: int) -> int:
    n = p - 1
    m = math.isqrt(n) + 1
    baby = {}
    e = 1
    for j in range(m):
        baby.setdefault(e, j)
        e = e * g % p
    step = pow(g, -m, p)
    y = x
    for i in range(m):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % n
        y = y * step % p
    raise ZeroInverse(f"no discrete log for {x} mod {p}")


def mod_inv(x: int, ctx: FieldContext) -> int:
    x %= ctx.p
    if x == 0:
        raise ZeroInverse("0 has no inverse")
    return pow(x, -1, ctx.p)


def rho_int(a: int, ctx: FieldContext) -> int:
    """Distance from ``a`` to the nearest multiple of ``p``."""
    r = a % ctx.p
    return min(r, ctx.p - r)


def rho_frac(u: int, v: int, ctx: FieldContext) -> int:
    """``|w|`` where ``w = u/v mod p`` is taken in ``(-p/2, p/2)``."""
    if v % ctx.p == 0:
        raise ZeroDenominator(f"denominator {v} is divisible by {ctx.p}")
    return rho_int(u * pow(v, -1, ctx.p), ctx)


def rho_array(a: np.ndarray, p: int) -> np.ndarray:
    r = np.asarray(a, dtype=np.int64) % p
    return np.minimum(r, p - r)


def e_p(z: int, ctx: FieldContext) -> complex:
    # reduce first so that e_p(z + p) == e_p(z) bit for bit
    return complex(ctx.roots[z % ctx.p])


@dataclass(frozen=True)
class PolySpec:
    """Polynomial ``a_0 + a_1 X + ... + a_d X^d`` over F_p with ``a_d != 0``."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        cs = tuple(int(c) % self.p for c in self.coeffs)
        if not cs or cs[-1] == 0:
            raise BadPolynomial(f"leading coefficient must be nonzero mod {self.p}: {self.coeffs}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], ctx: FieldContext) -> "PolySpec":
        return cls(tuple(coeffs), ctx.p)

    @classmethod
    def linear(cls, a: int, b: int, ctx: FieldContext) -> "PolySpec":
        return cls((b, a), ctx.p)

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised Horner; ``p < 2**31`` keeps every product inside int64."""
        xs = np.asarray(xs, dtype=np.int64) % self.p
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = (acc * xs + c) % self.p
        return acc

    def shifted(self, A: int) -> "PolySpec":
        """The polynomial ``f(A + X)``."""
        p = self.p
        out = [0] * len(self.coeffs)
        # Horner on polynomials: acc <- acc*(X + A) + c
        for c in reversed(self.coeffs):
            nxt = [0] * len(out)
            for i, a in enumerate(out):
                if a:
                    nxt[i] = (nxt[i] + a * A) % p
                    if i + 1 < len(nxt):
                        nxt[i + 1] = (nxt[i + 1] + a) % p
            nxt[0] = (nxt[0] + c) % p
            out = nxt
        return PolySpec(tuple(out), p)


def poly_eval(f: PolySpec, x: int, ctx: FieldContext) -> int:
    return f(x)


@dataclass(frozen=True)
class MultChar:
    """Character ``chi(g^n) = exp(2 pi i j n / m)`` with ``m | p-1``, ``1 <= j < m``."""

    ctx: FieldContext
    m: int
    j: int

    def __post_init__(self):
        p1 = self.ctx.p - 1
        if self.m < 2 or p1 % self.m != 0:
            raise BadCharacter(f"order {self.m} must divide p-1 = {p1} and be >= 2")
        if not 1 <= self.j <= self.m - 1:
            raise BadCharacter(f"index j={self.j} must lie in [1, {self.m - 1}]")

    @classmethod
    def quadratic(cls, ctx: FieldContext) -> "MultChar":
        return cls(ctx, 2, 1)

    @classmethod
    def all_nonprincipal(cls, ctx: FieldContext) -> list["MultChar"]:
        """Each of the p-2 nonprincipal characters exactly once."""
        return [cls(ctx, ctx.p - 1, j) for j in range(1, ctx.p - 1)]

    @cached_property
    def table(self) -> np.ndarray:
        """``table[x] = chi(x)`` for ``0 <= x < p``, with ``chi(0) = 0``."""
        ctx = self.ctx
        n = np.arange(ctx.p - 1)
        vals = np.exp(TWO_PI_I * ((self.j * n) % self.m) / self.m)
        out = np.zeros(ctx.p, dtype=complex)
        out[ctx.powers] = vals
        return out

    def __call__(self, x: int) -> complex:
        x %= self.ctx.p
        if x == 0:
            return 0j
        if self.ctx.p <= self.ctx.index_table_cap:
            return complex(self.table[x])
        n = self.ctx.index(x)
        return cmath.exp(TWO_PI_I * ((self.j * n) % self.m) / self.m)


def chi_eval(chi: MultChar, x: int) -> complex:
    return chi(x)
