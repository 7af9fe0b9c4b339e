"""Flat ``key = value`` experiment configuration.

``#`` starts a comment, lists are comma separated and rationals are written
``num/den``.  Every scalar axis (``p``, ``d``, ``U`` ...) is a list so the same
file drives single evaluations and cartesian sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in _items(text))


def _rationals(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in _items(text))


def _words(text: str) -> tuple[str, ...]:
    return tuple(_items(text))


def _items(text: str) -> list[str]:
    text = text.strip()
    if not text:
        return []
    return [x.strip() for x in text.split(",")]


def _int(text: str) -> int:
    return int(text.strip())


def _str(text: str) -> str:
    return text.strip()


def _emit_list(vals) -> str:
    return ", ".join(str(v) for v in vals)


# key -> (parser, emitter)
_LIST = (_ints, _emit_list)
SCHEMA = {
    "p": _LIST,
    "f": _LIST,
    "d": _LIST,
    "k": _LIST,
    "T": _LIST,
    "U": _LIST,
    "V": _LIST,
    "Z": _LIST,
    "L": _LIST,
    "K": _LIST,
    "nu": _LIST,
    "alpha": (_rationals, _emit_list),
    "beta": (_rationals, _emit_list),
    "a": (_int, str),
    "b": (_int, str),
    "chi_order": (_int, str),
    "chi_index": (_int, str),
    "region": (_str, str),
    "weights": (_str, str),
    "seed": (_int, str),
    "sums": (_words, _emit_list),
    "quantities": (_words, _emit_list),
    "out": (_str, str),
    "workcap": (_str, str),
    "parallel": (_int, str),
}

SUM_KINDS = ("S", "T", "K", "S1", "T1", "K1")
QUANTITIES = ("J", "N", "tuples", "moment", "census")


@dataclass(frozen=True)
class ExperimentConfig:
    p: tuple[int, ...] = ()
    f: tuple[int, ...] = ()  # a_0..a_d; empty means X^d
    d: tuple[int, ...] = (1,)
    k: tuple[int, ...] = (1,)
    T: tuple[int, ...] = ()
    U: tuple[int, ...] = ()
    V: tuple[int, ...] = ()
    Z: tuple[int, ...] = ()
    L: tuple[int, ...] = ()
    K: tuple[int, ...] = ()
    nu: tuple[int, ...] = (1,)
    alpha: tuple[Fraction, ...] = ()
    beta: tuple[Fraction, ...] = ()
    a: int = 1
    b: int = 0
    chi_order: int = 2
    chi_index: int = 1
    region: str = "rectangle"  # or a path to a polygon file
    weights: str = "unit"  # unit | random | path to a weights file
    seed: int = 0
    sums: tuple[str, ...] = ("S",)
    quantities: tuple[str, ...] = ("J",)
    out: str = ""
    workcap: str = ""
    parallel: int = 1
    present: frozenset = field(default=frozenset(), compare=False)

    def require(self, *keys: str) -> None:
        for key in keys:
            if key not in self.present and not getattr(self, key):
                raise ConfigError(f"missing required key '{key}'")

    def single(self, key: str) -> int:
        vals = getattr(self, key)
        if len(vals) != 1:
            raise ConfigError(f"key '{key}' must have exactly one value here, got {len(vals)}")
        return vals[0]


def parse_config(text: str) -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key not in SCHEMA:
            raise ConfigError(f"unknown key '{key}'", lineno)
        if key in values:
            raise ConfigError(f"duplicate key '{key}'", lineno)
        try:
            values[key] = SCHEMA[key][0](val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad value for '{key}': {val.strip()!r} ({exc})", lineno) from None
    cfg = ExperimentConfig(**values, present=frozenset(values))
    for s in cfg.sums:
        if s not in SUM_KINDS:
            raise ConfigError(f"unknown sum kind '{s}' (choose from {', '.join(SUM_KINDS)})")
    for q in cfg.quantities:
        if q not in QUANTITIES:
            raise ConfigError(f"unknown quantity '{q}' (choose from {', '.join(QUANTITIES)})")
    return cfg


def emit_config(cfg: ExperimentConfig) -> str:
    lines = []
    for fld in fields(cfg):
        if fld.name == "present":
            continue
        lines.append(f"{fld.name} = {SCHEMA[fld.name][1](getattr(cfg, fld.name))}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    return replace(cfg, present=cfg.present | frozenset(kw), **kw)
