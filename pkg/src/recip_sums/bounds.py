"""Exponent calculus for the bounds at ``U = p^alpha``, ``V = p^beta``.

Every function returns the exact exponent of p (a ``Fraction``) with the
``p^{o(1)}`` factors suppressed.  A bound is nontrivial when its exponent is
strictly below ``alpha + beta``, the exponent of the trivial bound ``UV``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadDegree, BadK

Q = Fraction

DEFAULT_KMAX = 64


def as_rational(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exponents must be exact; pass a Fraction, int or 'num/den' string")
    return Fraction(x)


def exp_trivial_bilinear(alpha, beta) -> Fraction:
    """``sqrt(U V p)``."""
    return (as_rational(alpha) + as_rational(beta) + 1) / 2


def exp_trivial_S2() -> Fraction:
    """``p log p``."""
    return Q(1)


def exp_thm_S_pure(d: int, alpha, beta) -> Fraction:
    """``p^{d/(d+1)} U^{d/2} + V``."""
    if d < 1:
        raise BadDegree(f"need d >= 1, got {d}")
    a, b = as_rational(alpha), as_rational(beta)
    return max(Q(d, d + 1) + d * a / 2, b)


def exp_cor_slice(d: int, alpha, beta) -> Fraction:
    """``V`` when ``U <= V^{2/d} p^{-2/(d+1)}``, else ``U V^{1-2/d} p^{2/(d+1)}``."""
    if d < 1:
        raise BadDegree(f"need d >= 1, got {d}")
    a, b = as_rational(alpha), as_rational(beta)
    if a <= 2 * b / d - Q(2, d + 1):
        return b
    return a + (1 - Q(2, d)) * b + Q(2, d + 1)


def exp_thm_Sabd(k: int, alpha, beta) -> Fraction:
    """``V^{1-1/2k} (U + U^{k/(k+1)} p^{1/2k})``."""
    if k < 1:
        raise BadK(f"need k >= 1, got {k}")
    a, b = as_rational(alpha), as_rational(beta)
    return b * (1 - Q(1, 2 * k)) + max(a, a * k / (k + 1) + Q(1, 2 * k))


def optimal_k(alpha, beta, k_max: int = DEFAULT_KMAX) -> tuple[tuple[int, ...], Fraction]:
    """All ``k in [1, k_max]`` minimising :func:`exp_thm_Sabd`, with the minimum."""
    if k_max < 1:
        raise BadK(f"need k_max >= 1, got {k_max}")
    vals = {k: exp_thm_Sabd(k, alpha, beta) for k in range(1, k_max + 1)}
    best = min(vals.values())
    return tuple(k for k, v in vals.items() if v == best), best


def exp_thm_Kmix1(alpha, beta) -> Fraction:
    """``V^{3/4} (U^{7/8} p^{1/8} + U^{1/2} p^{1/4})``."""
    a, b = as_rational(alpha), as_rational(beta)
    return 3 * b / 4 + max(7 * a / 8 + Q(1, 8), a / 2 + Q(1, 4))


def exp_thm_Kmix2(alpha, beta) -> Fraction:
    """``U V^{1/2} p^{1/3} + U^{1/2} V``."""
    a, b = as_rational(alpha), as_rational(beta)
    return max(a + b / 2 + Q(1, 3), a / 2 + b)


def exp_K_pure(alpha, beta) -> Fraction:
    """``sqrt(U p) + V`` for single-weight Kloosterman sums."""
    a, b = as_rational(alpha), as_rational(beta)
    return max((1 + a) / 2, b)


def exp_K_zero(alpha, beta) -> Fraction:
    """``U + V`` for single-weight Kloosterman sums with ``b = 0``."""
    return max(as_rational(alpha), as_rational(beta))


def is_nontrivial(exponent: Fraction, alpha, beta) -> bool:
    return exponent < as_rational(alpha) + as_rational(beta)


def thm_T_hypotheses(d: int, alpha, beta, eps, delta) -> bool:
    """``U >= p^{1/d + eps}`` and ``V >= p^{1/4 - delta}``, degree ``d >= 3``."""
    if d < 3:
        raise BadDegree(f"the character-sum range needs d >= 3, got {d}")
    a, b = as_rational(alpha), as_rational(beta)
    return a >= Q(1, d) + as_rational(eps) and b >= Q(1, 4) - as_rational(delta)


# ---------------------------------------------------------------------------
# comparison table

COMPARED = ("Thm23", "Thm24", "Thm25")
REFERENCE = ("TrivialBilinear", "TrivialS2", "KPure", "KZero", "Thm21", "Cor22")


@dataclass(frozen=True)
class BoundRow:
    label: str
    exponent: Fraction
    nontrivial: bool
    winner: bool = False
    k_set: tuple[int, ...] = field(default=())


def bound_rows(alpha, beta, k_max: int = DEFAULT_KMAX, d: int = 1) -> list[BoundRow]:
    """Every bound at one ``(alpha, beta)``; the winner is starred among
    Thm23/Thm24/Thm25 only, and only when its exponent is the unique minimum."""
    a, b = as_rational(alpha), as_rational(beta)
    ks, e23 = optimal_k(a, b, k_max)
    exps = {
        "Thm23": e23,
        "Thm24": exp_thm_Kmix1(a, b),
        "Thm25": exp_thm_Kmix2(a, b),
        "TrivialBilinear": exp_trivial_bilinear(a, b),
        "TrivialS2": exp_trivial_S2(),
        "KPure": exp_K_pure(a, b),
        "KZero": exp_K_zero(a, b),
        "Thm21": exp_thm_S_pure(d, a, b),
        "Cor22": exp_cor_slice(d, a, b),
    }
    live = [lab for lab in COMPARED if is_nontrivial(exps[lab], a, b)]
    winner = None
    if live:
        best = min(exps[lab] for lab in live)
        tied = [lab for lab in live if exps[lab] == best]
        if len(tied) == 1:
            winner = tied[0]
    return [
        BoundRow(lab, exps[lab], is_nontrivial(exps[lab], a, b), lab == winner, ks if lab == "Thm23" else ())
        for lab in COMPARED + REFERENCE
    ]


def compare_table(rows: Iterable[Sequence], k_max: int = DEFAULT_KMAX) -> list[list[BoundRow]]:
    return [bound_rows(a, b, k_max) for a, b in rows]


PUBLISHED_ROWS = ((Q(2, 5), Q(3, 10)), (Q(2, 5), Q(2, 5)), (Q(1, 5), Q(4, 5)))

# label -> (exponent, k_set, nontrivial, winner); k_set only for Thm23
PUBLISHED_TABLE = (
    {
        "Thm23": (Q(419, 600), (14, 15), True, True),
        "Thm24": (None, (), False, False),
        "Thm25": (None, (), False, False),
    },
    {
        "Thm23": (Q(111, 140), (6, 7), True, False),
        "Thm24": (Q(31, 40), (), True, True),
        "Thm25": (None, (), False, False),
    },
    {
        "Thm23": (Q(59, 60), (2, 3), True, False),
        "Thm24": (Q(19, 20), (), True, False),
        "Thm25": (Q(14, 15), (), True, True),
    },
)


def check_published_table(k_max: int = DEFAULT_KMAX) -> list[str]:
    """Mismatches between the computed table and the published one (empty if none).

    Trivial entries are published as '---', so only their triviality is compared.
    """
    problems = []
    for (a, b), rows, want in zip(PUBLISHED_ROWS, compare_table(PUBLISHED_ROWS, k_max), PUBLISHED_TABLE):
        by_label = {r.label: r for r in rows}
        for lab, (exp, ks, nontrivial, winner) in want.items():
            got = by_label[lab]
            where = f"({a}, {b}) {lab}"
            if got.nontrivial != nontrivial:
                problems.append(f"{where}: nontrivial={got.nontrivial}, expected {nontrivial}")
            if exp is not None and got.exponent != exp:
                problems.append(f"{where}: exponent {got.exponent}, expected {exp}")
            if lab == "Thm23" and got.k_set != ks:
                problems.append(f"{where}: optimal k {got.k_set}, expected {ks}")
            if got.winner != winner:
                problems.append(f"{where}: winner={got.winner}, expected {winner}")
    return problems


def render_cell(row: BoundRow) -> str:
    if not row.nontrivial:
        return "---"
    star = "* " if row.winner else ""
    ks = ""
    if row.k_set:
        ks = " (k=" + " or ".join(str(k) for k in row.k_set) + ")"
    return f"{star}p^{row.exponent}{ks}"


def render_table(rows: Sequence[Sequence], table: list[list[BoundRow]]) -> str:
    header = ["(U,V)", "Thm23", "Thm24", "Thm25"]
    body = []
    for (a, b), brs in zip(rows, table):
        by_label = {r.label: r for r in brs}
        body.append([f"(p^{Q(a)}, p^{Q(b)})"] + [render_cell(by_label[lab]) for lab in COMPARED])
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)) for r in [header] + body]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)
