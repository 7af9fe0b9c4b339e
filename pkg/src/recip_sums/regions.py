"""Convex lattice regions inside [1,U] x [1,V] and complex weight sequences.

A region is the set of lattice points lying inside or on a convex polygon with
rational vertices.  Every column ``u`` then meets the region in a run of
consecutive ``v`` values, encoded as the half-open pair ``(X_u, Y_u]``; rows
are encoded the same way.  Empty intervals are normalised to ``(0, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadBounds, BadWeights, NotConvex, OutOfBox
from .rng import SplitMix64

Point = tuple[Fraction, Fraction]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dedupe(vertices: Sequence[Point]) -> list[Point]:
    out: list[Point] = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _check_convex(vs: list[Point]) -> None:
    n = len(vs)
    if n < 3:
        return
    crosses = [_cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) for i in range(n)]
    if all(c == 0 for c in crosses):
        return  # all vertices collinear: a degenerate segment is still convex
    if any(c > 0 for c in crosses) and any(c < 0 for c in crosses):
        raise NotConvex("vertex cycle turns both left and right")
    turning = 0.0
    for i in range(n):
        a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        d1 = (float(b[0] - a[0]), float(b[1] - a[1]))
        d2 = (float(c[0] - b[0]), float(c[1] - b[1]))
        turning += math.atan2(d1[0] * d2[1] - d1[1] * d2[0], d1[0] * d2[0] + d1[1] * d2[1])
    if abs(abs(turning) - 2 * math.pi) > 1e-6:
        raise NotConvex("vertex cycle is not a simple convex polygon")


def _slice(vs: list[Point], x: Fraction, axis: int) -> tuple[Fraction, Fraction] | None:
    """Range of the other coordinate where the line ``coord[axis] = x`` meets the polygon."""
    other = 1 - axis
    hits: list[Fraction] = []
    n = len(vs)
    for i in range(n if n > 1 else 1):
        a, b = vs[i], vs[(i + 1) % n]
        lo, hi = sorted((a[axis], b[axis]))
        if not lo <= x <= hi:
            continue
        if a[axis] == b[axis]:
            hits += [a[other], b[other]]
        else:
            hits.append(a[other] + (x - a[axis]) * (b[other] - a[other]) / (b[axis] - a[axis]))
    if not hits:
        return None
    return min(hits), max(hits)


@dataclass(frozen=True)
class ConvexRegion:
    """Lattice points of a convex polygon, or the full rectangle when ``vertices`` is None.

    ``u_lo``/``u_hi`` restrict the region to a vertical strip of columns,
    which is how slices of a region are represented.
    """

    U: int
    V: int
    vertices: tuple[Point, ...] | None = None
    u_lo: int = 1
    u_hi: int | None = field(default=None)

    def __post_init__(self):
        if self.U < 1 or self.V < 1:
            raise BadBounds(f"U and V must be >= 1, got U={self.U}, V={self.V}")
        if self.u_hi is None:
            object.__setattr__(self, "u_hi", self.U)

    @property
    def is_rectangle(self) -> bool:
        return self.vertices is None and self.u_lo == 1 and self.u_hi == self.U

    def _intervals(self, along_columns: bool) -> tuple[np.ndarray, np.ndarray]:
        n, cap = (self.U, self.V) if along_columns else (self.V, self.U)
        lo = np.zeros(n, dtype=np.int64)
        hi = np.zeros(n, dtype=np.int64)
        vs = list(self.vertices) if self.vertices is not None else None
        axis = 0 if along_columns else 1
        for i in range(n):
            x = i + 1
            if vs is None:
                a, b = 1, cap
            else:
                seg = _slice(vs, Fraction(x), axis)
                if seg is None:
                    continue
                a, b = max(math.ceil(seg[0]), 1), min(math.floor(seg[1]), cap)
            if along_columns:
                if not self.u_lo <= x <= self.u_hi:
                    continue
            else:
                a, b = max(a, self.u_lo), min(b, self.u_hi)
            if a <= b:
                lo[i], hi[i] = a - 1, b
        return lo, hi

    @cached_property
    def columns(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``(X, Y)`` with ``X[u-1], Y[u-1]`` the column interval of ``u``."""
        return self._intervals(True)

    @cached_property
    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        return self._intervals(False)

    def column_interval(self, u: int) -> tuple[int, int]:
        if not 1 <= u <= self.U:
            return (0, 0)
        X, Y = self.columns
        return int(X[u - 1]), int(Y[u - 1])

    def row_interval(self, v: int) -> tuple[int, int]:
        if not 1 <= v <= self.V:
            return (0, 0)
        X, Y = self.rows
        return int(X[v - 1]), int(Y[v - 1])

    def __contains__(self, point: tuple[int, int]) -> bool:
        u, v = point
        X, Y = self.column_interval(u)
        return X < v <= Y

    def __len__(self) -> int:
        X, Y = self.columns
        return int((Y - X).sum())

    def points(self) -> Iterator[tuple[int, int]]:
        """Members in lexicographic (u, v) order."""
        X, Y = self.columns
        for u in range(1, self.U + 1):
            for v in range(int(X[u - 1]) + 1, int(Y[u - 1]) + 1):
                yield u, v

    def slice_columns(self, lo: int, hi: int) -> "ConvexRegion":
        """The part of the region with ``lo <= u <= hi``."""
        return replace(self, u_lo=max(lo, self.u_lo), u_hi=min(hi, self.u_hi))


def region_rectangle(U: int, V: int) -> ConvexRegion:
    return ConvexRegion(U, V)


def region_from_polygon(vertices: Iterable[tuple], U: int, V: int) -> ConvexRegion:
    """Validate a rational convex polygon inside ``[0,U] x [0,V]``."""
    if U < 1 or V < 1:
        raise BadBounds(f"U and V must be >= 1, got U={U}, V={V}")
    vs = [(Fraction(x), Fraction(y)) for x, y in vertices]
    if len(vs) < 3:
        raise NotConvex("a polygon needs at least 3 vertices")
    for x, y in vs:
        if not (0 <= x <= U and 0 <= y <= V):
            raise OutOfBox(f"vertex ({x}, {y}) lies outside [0,{U}] x [0,{V}]")
    vs = _dedupe(vs)
    _check_convex(vs)
    return ConvexRegion(U, V, tuple(vs))


def parse_polygon(text: str) -> list[Point]:
    """Parse ``u v`` rational vertex lines (``3/2 4``); ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two rationals, got {raw!r}")
        out.append((Fraction(parts[0]), Fraction(parts[1])))
    return out


def format_polygon(vertices: Iterable[tuple]) -> str:
    return "".join(f"{Fraction(x)} {Fraction(y)}\n" for x, y in vertices)


def load_polygon(path: str | Path, U: int, V: int) -> ConvexRegion:
    return region_from_polygon(parse_polygon(Path(path).read_text()), U, V)


@dataclass(frozen=True, eq=False)
class WeightSeq:
    values: np.ndarray
    provenance: str = "unit"

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=complex)
        if vals.ndim != 1 or len(vals) < 1:
            raise BadWeights("weights must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(vals)) or np.abs(vals).max() > 1 + 1e-12:
            raise BadWeights("every weight must be finite with modulus <= 1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def weights_unit(n: int) -> WeightSeq:
    if n < 1:
        raise BadWeights("n must be >= 1")
    return WeightSeq(np.ones(n, dtype=complex), "unit")


def weights_random(n: int, seed: int) -> WeightSeq:
    """i.i.d. uniform points of the closed unit disc from SplitMix64(seed)."""
    if n < 1:
        raise BadWeights("n must be >= 1")
    g = SplitMix64(seed)
    return WeightSeq(np.array([g.unit_disc() for _ in range(n)]), f"seeded-random:{seed}")


def weights_from_file(path: str | Path) -> WeightSeq:
    """One weight per line: ``re`` or ``re im``."""
    vals = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        re_ = float(line[0])
        im = float(line[1]) if len(line) > 1 else 0.0
        vals.append(complex(re_, im))
    return WeightSeq(np.array(vals, dtype=complex), f"file:{path}")
