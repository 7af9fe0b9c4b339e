import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from recip_sums.errors import PreconditionFailed, RangeTooLarge
from recip_sums.field import FieldContext, PolySpec, rho_int
from recip_sums.pigeonhole import canonical_targets, find_t, shrink_poly
from recip_sums.rng import SplitMix64
from recip_sums.verify import check_pigeonhole, random_poly


def test_find_t_trivial():
    for p in (5, 11, 101):
        res = find_t([1], [1], FieldContext(p))
        assert res.t == 1 and res.c <= 1


def test_find_t_linear_example():
    ctx = FieldContext(11)
    res = find_t([1, 5], [4, 4], ctx)
    exhaustive = min(max(rho_int(t, ctx), rho_int(5 * t, ctx)) / 4 for t in range(1, 11))
    assert res.t == 2 and res.per_i == (2, 1)
    assert res.c == pytest.approx(0.5) == pytest.approx(exhaustive)
    assert res.guarantee_applies


def test_find_t_ties_pick_smallest():
    ctx = FieldContext(13)
    res = find_t([0, 0], [2, 2], ctx)
    assert res.t == 1 and res.c == 0


def test_find_t_preconditions():
    ctx = FieldContext(11)
    with pytest.raises(PreconditionFailed):
        find_t([1, 2], [4], ctx)
    with pytest.raises(PreconditionFailed):
        find_t([1], [11], ctx)
    with pytest.raises(PreconditionFailed):
        find_t([1], [0.5], ctx)
    with pytest.raises(RangeTooLarge):
        find_t([1] * 9, [2] * 9, ctx)


@given(st.sampled_from([11, 13, 31, 61, 97]), st.lists(st.integers(0, 10**6), min_size=1, max_size=4))
def test_dirichlet_guarantee(p, a):
    # T_i = p^{d/(d+1)} multiply to p^d, so some t has every rho(a_i t) <= T_i
    ctx = FieldContext(p)
    d = len(a) - 1
    T = [p ** (d / (d + 1)) if d else 1.0] * (d + 1)
    res = find_t(a, T, ctx)
    assert res.c <= 1 + 1e-12
    assert all(r <= t + 1e-9 for r, t in zip(res.per_i, T))


def test_canonical_targets_examples():
    p = 10007
    ctx = FieldContext(p)
    W, T = canonical_targets(1, 1, ctx)
    assert W == pytest.approx(math.sqrt(p)) and T == pytest.approx([math.sqrt(p)] * 2)
    W, T = canonical_targets(2, 2, ctx)
    assert W == pytest.approx(2 * p ** (2 / 3))
    assert math.prod(T) == pytest.approx(p**2, rel=1e-9)


def test_canonical_targets_small_U_condition():
    p = 10007
    ctx = FieldContext(p)
    # d = 1 only needs U < p (see decisions ledger)
    canonical_targets(1, math.ceil(p ** (2 / 3)), ctx)
    with pytest.raises(PreconditionFailed):
        canonical_targets(2, math.ceil(p ** (2 / 3)), ctx)
    with pytest.raises(PreconditionFailed):
        canonical_targets(3, 10, ctx)  # 10^12 >= p^2


def test_shrink_already_small():
    ctx = FieldContext(10007)
    f = PolySpec.from_coeffs([3, -2, 1], ctx)
    sp = shrink_poly(f, 3, ctx)
    assert sp.c <= 1
    assert max(abs(b) / t for b, t in zip((3, -2, 1), sp.targets)) <= 1


@pytest.mark.parametrize("p,d,seed", [(1009, 1, 1), (1009, 2, 2), (10007, 3, 3), (10007, 2, 4)])
def test_shrink_congruence_and_size(p, d, seed):
    ctx = FieldContext(p)
    g = SplitMix64(seed)
    f = random_poly(g, d, ctx)
    U = max(1, math.floor(p ** (2 / (d * (d + 1)))) - 1)
    sp = shrink_poly(f, U, ctx)
    for _ in range(20):
        x = g.randbelow(p)
        assert sp(x) % p == sp.t * f(x) % p
    if sp.c <= 1:
        Z = 7
        for u in range(1, U + 1):
            for z in range(1, Z + 1):
                assert abs(sp(u) * z) <= (d + 1) * sp.W * Z


def test_pigeonhole_suite():
    res = check_pigeonhole([11, 13, 29], [1, 2, 3], 10)
    assert res.passed, res.failures
    assert 0 <= res.notes["max_c"] <= 2
