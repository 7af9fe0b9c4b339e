"""Experiment drivers behind the CLI subcommands.

Each driver returns ``(columns, records)``.  The column tuple depends on the
subcommand only; records are emitted in deterministic (lexicographic axis)
order whatever the worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import bounds, caps
from .config import ExperimentConfig
from .counting import (
    char_moment,
    char_moment_bound,
    count_J_conv,
    count_J_naive,
    count_N,
    count_N_tuples,
    count_N_tuples_direct,
    discrepancy,
    rho_census,
)
from .errors import ConfigError, RangeTooLarge, RecipSumsError
from .field import FieldContext, MultChar, PolySpec
from .pigeonhole import shrink_poly
from .regions import (
    ConvexRegion,
    WeightSeq,
    load_polygon,
    region_rectangle,
    weights_from_file,
    weights_random,
    weights_unit,
)
from .rng import SplitMix64
from .sums import eval_K, eval_S, eval_T, weyl_sum, wooley_bound

log = logging.getLogger(__name__)


@dataclass
class RunRecord:
    values: dict
    seed: int = 0
    wall_s: float = 0.0


# ---------------------------------------------------------------------------
# helpers


def floor_power(p: int, e: Fraction) -> int:
    """``floor(p**e)`` exactly, for rational ``e >= 0``."""
    e = Fraction(e)
    target = p**e.numerator
    n = e.denominator
    lo, hi = 0, 1
    while hi**n <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**n <= target:
            lo = mid
        else:
            hi = mid
    return lo


def _poly(cfg: ExperimentConfig, ctx: FieldContext, d: int) -> PolySpec:
    if cfg.f:
        return PolySpec.from_coeffs(cfg.f, ctx)
    return PolySpec.from_coeffs([0] * d + [1], ctx)


def _weights(cfg: ExperimentConfig, n: int, stream: int) -> WeightSeq:
    if cfg.weights == "unit":
        return weights_unit(n)
    if cfg.weights == "random":
        g = SplitMix64(cfg.seed)
        seeds = [g.next_u64() for _ in range(stream + 1)]
        return weights_random(n, seeds[stream])
    w = weights_from_file(cfg.weights)
    if len(w) < n:
        raise ConfigError(f"weights file {cfg.weights} has {len(w)} entries, need {n}")
    return w


def _region(cfg: ExperimentConfig, U: int, V: int) -> ConvexRegion:
    if cfg.region in ("", "rectangle", "rect"):
        return region_rectangle(U, V)
    return load_polygon(cfg.region, U, V)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(columns: Sequence[str], records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(columns)
    for rec in records:
        extra = set(rec.values) - set(columns)
        if extra:
            raise RecipSumsError(f"record has columns outside the schema: {sorted(extra)}")
        w.writerow([_fmt(rec.values.get(c)) for c in columns])
    return buf.getvalue()


def run_cells(fn: Callable, cells: list, parallel: int) -> list[RunRecord]:
    if parallel > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            out = list(ex.map(fn, cells))
    else:
        out = [fn(c) for c in cells]
    for rec in out:
        log.info("cell %s done in %.3fs", {k: rec.values.get(k) for k in ("kind", "p", "U", "V")}, rec.wall_s)
    return out


# ---------------------------------------------------------------------------
# eval / sweep


SUM_COLUMNS = (
    "kind", "p", "d", "alpha", "beta", "U", "V", "status", "terms", "excluded",
    "re", "im", "abs", "UV", "benchmark", "hard_bound", "thm_ref",
    "ratio_trivial", "ratio_benchmark", "ratio_thm", "weights", "seed",
)


def _thm_ref(kind: str, d: int, U: int, V: int, p: int) -> float:
    if kind.startswith("S"):
        return p ** (d / (d + 1)) * U ** (d / 2) + V
    if kind.startswith("K"):
        return U * math.sqrt(V) * p ** (1 / 3) + math.sqrt(U) * V
    return math.sqrt(d * U * V * p)


def _sum_cell(cell) -> RunRecord:
    cfg, kind, p, d, alpha, beta, U, V = cell
    t0 = time.perf_counter()
    row = {"kind": kind, "p": p, "d": d, "alpha": alpha, "beta": beta, "U": U, "V": V,
           "weights": cfg.weights, "seed": cfg.seed}
    if not (1 <= U <= p and 1 <= V <= p) or U * V > caps.cap("naive"):
        row["status"] = "skipped"
        return RunRecord(row, cfg.seed, time.perf_counter() - t0)
    ctx = FieldContext(p)
    region = _region(cfg, U, V)
    A = _weights(cfg, U, 0)
    B = _weights(cfg, V, 1) if kind in ("S", "T", "K") else weights_unit(V)
    if kind.startswith("K"):
        res = eval_K(cfg.a, cfg.b, A, B, region, ctx)
        d = 1
    elif kind.startswith("T"):
        f = _poly(cfg, ctx, d)
        d = f.d
        res = eval_T(MultChar(ctx, cfg.chi_order, cfg.chi_index), f, A, B, region, ctx)
    else:
        f = _poly(cfg, ctx, d)
        d = f.d
        res = eval_S(f, A, B, region, ctx)
    hard = math.sqrt(d * U * V * p)
    ref = _thm_ref(kind, d, U, V, p)
    row.update(
        d=d, status="ok", terms=res.terms, excluded=res.excluded, re=res.value.real, im=res.value.imag,
        abs=res.abs, UV=res.trivial_bound, benchmark=res.benchmark, hard_bound=hard, thm_ref=ref,
        ratio_trivial=res.abs / res.trivial_bound, ratio_benchmark=res.abs / res.benchmark,
        ratio_thm=res.abs / ref,
    )
    return RunRecord(row, cfg.seed, time.perf_counter() - t0)


def _uv_pairs(cfg: ExperimentConfig, p: int) -> list[tuple]:
    if cfg.U or cfg.V:
        cfg.require("U", "V")
        return [(None, None, U, V) for U, V in itertools.product(cfg.U, cfg.V)]
    cfg.require("alpha", "beta")
    return [(a, b, floor_power(p, a), floor_power(p, b)) for a, b in itertools.product(cfg.alpha, cfg.beta)]


def sum_cells(cfg: ExperimentConfig) -> list:
    cfg.require("p")
    cells = []
    for kind in cfg.sums:
        for p in cfg.p:
            ds = (None,) if cfg.f or kind.startswith("K") else cfg.d
            for d in ds:
                for a, b, U, V in _uv_pairs(cfg, p):
                    cells.append((cfg, kind, p, d if d is not None else 1, a, b, U, V))
    return cells


def cmd_eval(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[RunRecord]]:
    """One evaluation per requested sum kind at a single (p, U, V)."""
    cfg.require("p", "U", "V")
    for key in ("p", "U", "V"):
        cfg.single(key)
    if not cfg.f:
        cfg.single("d")
    return SUM_COLUMNS, [_sum_cell(c) for c in sum_cells(cfg)]


def cmd_sweep(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[RunRecord]]:
    return SUM_COLUMNS, run_cells(_sum_cell, sum_cells(cfg), cfg.parallel)


# ---------------------------------------------------------------------------
# count


COUNT_COLUMNS = (
    "quantity", "p", "d", "k", "a", "b", "T", "U", "V", "Z", "L", "K", "nu", "status",
    "count", "count_check", "bound_rhs", "ratio", "deviation", "weil_ref", "weil_ratio",
)


def _count_cell(cell) -> RunRecord:
    cfg, q, p, params = cell
    t0 = time.perf_counter()
    row = {"quantity": q, "p": p, **params}
    try:
        ctx = FieldContext(p)
        if q == "J":
            d, k, T = params["d"], params["k"], params["T"]
            rep = count_J_conv(d, k, cfg.a, cfg.b, T, ctx)
            try:
                check = count_J_naive(d, k, cfg.a, cfg.b, T, ctx).count
            except RangeTooLarge:
                check = None
            row.update(a=cfg.a, b=cfg.b, count=rep.count, count_check=check, bound_rhs=rep.bound_rhs, ratio=rep.ratio)
        elif q == "N":
            f = _poly(cfg, ctx, params["d"])
            U, Z = params["U"], params["Z"]
            rep = count_N(f, U, Z, ctx)
            dev = rep.count - U * Z / p
            weil = math.sqrt(p) * math.log(p) ** 2
            row.update(d=f.d, count=rep.count, bound_rhs=rep.bound_rhs, ratio=rep.ratio,
                       deviation=dev, weil_ref=weil, weil_ratio=abs(dev) / weil)
        elif q == "tuples":
            f = _poly(cfg, ctx, params["d"])
            U, V, L = params["U"], params["V"], params["L"]
            r = [f(u) for u in range(1, U + 1)]
            rep = count_N_tuples(r, L, V, ctx)
            try:
                check = count_N_tuples_direct(r, L, V, ctx)
            except RangeTooLarge:
                check = None
            row.update(d=f.d, count=rep.count, count_check=check, bound_rhs=rep.bound_rhs, ratio=rep.ratio)
        elif q == "moment":
            K, nu = params["K"], params["nu"]
            val = char_moment(MultChar(ctx, cfg.chi_order, cfg.chi_index), K, nu, ctx)
            ref = char_moment_bound(K, nu, p)
            row.update(count=val, count_check=K * (p - K) if nu == 1 else None, bound_rhs=ref, ratio=val / ref)
        elif q == "census":
            f = _poly(cfg, ctx, params["d"])
            U, V = params["U"], params["V"]
            c = rho_census(f, U, V, ctx)
            row.update(d=f.d, count=c.R, count_check=c.total, bound_rhs=c.dyadic_bound,
                       ratio=c.prelim_sum / c.dyadic_bound if c.dyadic_bound else None)
        row["status"] = "ok"
    except RangeTooLarge:
        row["status"] = "skipped"
    except RecipSumsError as exc:
        row["status"] = f"error: {exc}"
    return RunRecord(row, cfg.seed, time.perf_counter() - t0)


def count_cells(cfg: ExperimentConfig) -> list:
    cfg.require("p")
    axes = {
        "J": ("d", "k", "T"),
        "N": ("d", "U", "Z"),
        "tuples": ("d", "U", "V", "L"),
        "moment": ("K", "nu"),
        "census": ("d", "U", "V"),
    }
    cells = []
    for q in cfg.quantities:
        names = axes[q]
        for name in names:
            if name != "d" or not cfg.f:
                cfg.require(name)
        lists = [getattr(cfg, n) if not (n == "d" and cfg.f) else (len(cfg.f) - 1,) for n in names]
        for p in cfg.p:
            for combo in itertools.product(*lists):
                cells.append((cfg, q, p, dict(zip(names, combo))))
    return cells


def cmd_count(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[RunRecord]]:
    return COUNT_COLUMNS, run_cells(_count_cell, count_cells(cfg), cfg.parallel)


# ---------------------------------------------------------------------------
# pigeonhole / discrepancy


PIGEONHOLE_COLUMNS = ("p", "d", "U", "status", "t", "c", "W", "targets", "shrunk_coeffs")


def cmd_pigeonhole(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[RunRecord]]:
    cfg.require("p", "U")
    records = []
    for p, d, U in itertools.product(cfg.p, cfg.d if not cfg.f else (len(cfg.f) - 1,), cfg.U):
        t0 = time.perf_counter()
        ctx = FieldContext(p)
        f = _poly(cfg, ctx, d)
        row = {"p": p, "d": f.d, "U": U}
        try:
            sp = shrink_poly(f, U, ctx)
            row.update(status="ok", t=sp.t, c=sp.c, W=sp.W,
                       targets=" ".join(repr(x) for x in sp.targets),
                       shrunk_coeffs=" ".join(str(b) for b in sp.coeffs))
        except RecipSumsError as exc:
            row["status"] = f"error: {exc}"
        records.append(RunRecord(row, cfg.seed, time.perf_counter() - t0))
    return PIGEONHOLE_COLUMNS, records


DISCREPANCY_COLUMNS = ("p", "d", "U", "discrepancy", "constant_ref", "weyl_abs", "wooley_ref")


def cmd_discrepancy(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[RunRecord]]:
    """Discrepancy of ``f(1), ..., f(U)`` mod p, with the Weyl sum alongside."""
    cfg.require("p", "U")
    records = []
    for p, d, U in itertools.product(cfg.p, cfg.d if not cfg.f else (len(cfg.f) - 1,), cfg.U):
        t0 = time.perf_counter()
        ctx = FieldContext(p)
        f = _poly(cfg, ctx, d)
        r = f.eval_many(range(1, U + 1))
        row = {
            "p": p, "d": f.d, "U": U,
            "discrepancy": discrepancy(r, ctx),
            "constant_ref": 1 - 1 / p,
            "weyl_abs": abs(weyl_sum(f, U, ctx)),
            "wooley_ref": wooley_bound(f.d, U, ctx) if f.d >= 3 else None,
        }
        records.append(RunRecord(row, cfg.seed, time.perf_counter() - t0))
    return DISCREPANCY_COLUMNS, records


# ---------------------------------------------------------------------------
# comparison table

TABLE_COLUMNS = ("alpha", "beta", "label", "exponent", "nontrivial", "winner", "k_set")


def cmd_table_compare(rows: Sequence[tuple] | None = None, k_max: int = bounds.DEFAULT_KMAX):
    """Returns ``(rendered, columns, records, problems)``; ``problems`` lists
    any mismatch against the published table (always checked)."""
    rows = list(rows) if rows else list(bounds.PUBLISHED_ROWS)
    table = bounds.compare_table(rows, k_max)
    records = []
    for (a, b), brs in zip(rows, table):
        for br in brs:
            records.append(RunRecord({
                "alpha": Fraction(a), "beta": Fraction(b), "label": br.label, "exponent": br.exponent,
                "nontrivial": br.nontrivial, "winner": br.winner, "k_set": " ".join(map(str, br.k_set)),
            }))
    problems = bounds.check_published_table(k_max)
    return bounds.render_table(rows, table), TABLE_COLUMNS, records, problems


def save(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, newline="")
