from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from recip_sums import bounds
from recip_sums.bounds import (
    bound_rows,
    check_published_table,
    compare_table,
    exp_cor_slice,
    exp_K_pure,
    exp_K_zero,
    exp_thm_Kmix1,
    exp_thm_Kmix2,
    exp_thm_S_pure,
    exp_thm_Sabd,
    exp_trivial_bilinear,
    is_nontrivial,
    optimal_k,
    render_table,
    thm_T_hypotheses,
)
from recip_sums.errors import BadDegree, BadK
from recip_sums.verify import check_bounds

unit = st.fractions(min_value=0, max_value=1, max_denominator=60)


def test_trivial_bilinear():
    assert exp_trivial_bilinear(1, 1) == Q(3, 2)
    assert exp_trivial_bilinear(Q(2, 5), Q(3, 10)) == Q(17, 20)
    assert exp_trivial_bilinear(0, 0) == Q(1, 2)


def test_floats_rejected():
    with pytest.raises(TypeError):
        exp_trivial_bilinear(0.4, Q(1, 2))
    assert exp_trivial_bilinear("2/5", "3/10") == Q(17, 20)


def test_S_pure():
    assert exp_thm_S_pure(1, 0, 0) == Q(1, 2)
    assert exp_thm_S_pure(2, Q(1, 5), Q(4, 5)) == Q(13, 15)
    with pytest.raises(BadDegree):
        exp_thm_S_pure(0, 0, 0)


@given(unit, unit)
def test_S_pure_nontrivial_iff(alpha, beta):
    # for d = 1 the bound beats UV exactly when U V^2 > p, i.e. alpha + 2 beta > 1
    # (with V <= p^{1/2} U^{1/2} also needed for the V term)
    e = exp_thm_S_pure(1, alpha, beta)
    if alpha + 2 * beta > 1 and alpha > 0:
        assert is_nontrivial(e, alpha, beta)
    if alpha + 2 * beta <= 1:
        assert not is_nontrivial(e, alpha, beta)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_cor_slice_branches_agree_on_boundary(d):
    for beta in (Q(1, 2), Q(3, 4), Q(9, 10), Q(1)):
        alpha = 2 * beta / d - Q(2, d + 1)
        below = exp_cor_slice(d, alpha, beta)
        assert below == beta
        assert alpha + (1 - Q(2, d)) * beta + Q(2, d + 1) == beta


def test_cor_slice_branch_and_nontriviality():
    assert exp_cor_slice(3, Q(1, 1000), Q(3, 4) + Q(1, 100)) == Q(3, 4) + Q(1, 100)
    for d in (2, 3, 4):
        edge = Q(d, d + 1)
        assert is_nontrivial(exp_cor_slice(d, Q(1, 100), edge + Q(1, 50)), Q(1, 100), edge + Q(1, 50))


def test_cor_slice_d1_decreases_in_beta():
    # second branch alpha - beta + 1 at d = 1 (see decisions ledger)
    assert exp_cor_slice(1, Q(1, 2), Q(1, 10)) > exp_cor_slice(1, Q(1, 2), Q(2, 10))


def test_Sabd():
    assert exp_thm_Sabd(14, Q(2, 5), Q(3, 10)) == Q(419, 600)
    assert exp_thm_Sabd(6, Q(2, 5), Q(2, 5)) == Q(111, 140)
    with pytest.raises(BadK):
        exp_thm_Sabd(0, 0, 0)
    a, b = Q(1, 3), Q(1, 2)
    gaps = [a + b - exp_thm_Sabd(k, a, b) for k in (10, 100, 1000, 10000)]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < Q(1, 1000)


@pytest.mark.parametrize(
    "alpha,beta,ks,e",
    [(Q(2, 5), Q(3, 10), (14, 15), Q(419, 600)), (Q(2, 5), Q(2, 5), (6, 7), Q(111, 140)), (Q(1, 5), Q(4, 5), (2, 3), Q(59, 60))],
)
def test_optimal_k(alpha, beta, ks, e):
    assert optimal_k(alpha, beta) == (ks, e)
    assert optimal_k(alpha, beta, 256) == (ks, e)


def test_optimal_k_kmax():
    assert optimal_k(Q(2, 5), Q(3, 10), 1) == ((1,), exp_thm_Sabd(1, Q(2, 5), Q(3, 10)))
    with pytest.raises(BadK):
        optimal_k(0, 0, 0)


def test_Kmix():
    assert exp_thm_Kmix1(Q(2, 5), Q(2, 5)) == Q(31, 40)
    assert exp_thm_Kmix1(Q(1, 5), Q(4, 5)) == Q(19, 20)
    assert exp_thm_Kmix2(Q(1, 5), Q(4, 5)) == Q(14, 15)
    assert exp_thm_Kmix2(Q(2, 5), Q(2, 5)) == Q(14, 15)
    assert not is_nontrivial(Q(14, 15), Q(2, 5), Q(2, 5))
    assert exp_thm_Kmix2(0, 1) == 1 and not is_nontrivial(Q(1), 0, 1)


@given(unit, unit)
def test_Kmix1_nontrivial_needs_both_conditions(alpha, beta):
    if is_nontrivial(exp_thm_Kmix1(alpha, beta), alpha, beta):
        assert alpha + 2 * beta > 1 and 2 * alpha + beta > 1


def test_K_pure_and_zero():
    assert exp_K_zero(1, 1) == 1
    assert exp_K_pure(0, 0) == Q(1, 2)
    assert exp_K_pure(Q(1, 2), Q(3, 4)) == Q(3, 4)


def test_thm_T_hypotheses():
    assert thm_T_hypotheses(3, Q(1, 2), Q(1, 4), Q(1, 10), 0)
    assert not thm_T_hypotheses(3, Q(1, 3), Q(1, 2), Q(1, 10), 0)
    with pytest.raises(BadDegree):
        thm_T_hypotheses(2, Q(1, 2), Q(1, 2), 0, 0)


def test_published_table_reproduces():
    assert check_published_table() == []
    text = render_table(bounds.PUBLISHED_ROWS, compare_table(bounds.PUBLISHED_ROWS))
    assert "* p^419/600 (k=14 or 15)" in text
    assert "* p^31/40" in text
    assert "* p^14/15" in text
    assert text.count("---") >= 3


def test_table_degrades_with_small_kmax():
    assert check_published_table(1) != []
    table = compare_table(bounds.PUBLISHED_ROWS, 1)
    assert all(rows[0].k_set == (1,) and not rows[0].nontrivial for rows in table)
    text = render_table(bounds.PUBLISHED_ROWS, table)
    assert len(text.splitlines()) == 5 and "* p^14/15" in text


def test_winner_only_among_compared():
    rows = bound_rows(Q(1, 2), Q(1, 2))
    assert [r.label for r in rows][:3] == list(bounds.COMPARED)
    assert all(not r.winner for r in rows if r.label not in bounds.COMPARED)
    assert sum(r.winner for r in rows) <= 1


def test_trivial_S2_flips():
    by = {r.label: r for r in bound_rows(Q(3, 5), Q(3, 5))}
    assert by["TrivialS2"].nontrivial
    by = {r.label: r for r in bound_rows(Q(1, 5), Q(3, 5))}
    assert not by["TrivialS2"].nontrivial


def test_row_order_preserved():
    rows = [(Q(1, 2), Q(1, 3)), (Q(1, 3), Q(1, 2))]
    table = compare_table(rows)
    assert [t[0].exponent for t in table] == [optimal_k(*r)[1] for r in rows]


def test_bounds_suite():
    res = check_bounds()
    assert res.passed, res.failures
