"""Work caps for exhaustive computations.

Defaults can be overridden with the ``RECIP_SUMS_WORKCAP`` environment
variable, either a bare integer (the naive-enumeration state cap) or a
comma-separated list such as ``naive=1e8,conv=200000,tuples=1e7``.
"""

from __future__ import annotations

import os

from .errors import ConfigError

ENV_VAR = "RECIP_SUMS_WORKCAP"

DEFAULTS = {
    "naive": 10**9,  # states enumerated by count_J_naive (T^{2k})
    "conv": 10**5,  # largest p accepted by count_J_conv
    "tuples": 10**8,  # 6-tuples enumerated by the direct N oracle
    "coeffs": 8,  # coefficients accepted by find_t
}


def _parse_int(text: str) -> int:
    return int(float(text)) if any(c in text for c in ".eE") else int(text)


def parse_caps(text: str | None) -> dict[str, int]:
    caps = dict(DEFAULTS)
    if not text:
        return caps
    text = text.strip()
    try:
        if "=" not in text:
            caps["naive"] = _parse_int(text)
            return caps
        for item in text.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in caps:
                raise ConfigError(f"unknown work cap {key!r}")
            caps[key] = _parse_int(val.strip())
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad {ENV_VAR} value {text!r}: {exc}") from None
    return caps


def get_caps() -> dict[str, int]:
    return parse_caps(os.environ.get(ENV_VAR))


def cap(name: str) -> int:
    return get_caps()[name]
