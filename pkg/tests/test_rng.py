import math

from recip_sums.rng import SplitMix64, rng

SEED0 = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F, 0xF88BB8A8724C81EC]


def test_seed0_outputs_frozen():
    g = rng(0)
    assert [g.next_u64() for _ in range(4)] == SEED0


def test_seeds_differ():
    a, b = SplitMix64(1), SplitMix64(2)
    assert [a.next_u64() for _ in range(4)] != [b.next_u64() for _ in range(4)]


def test_ranges():
    g = SplitMix64(5)
    xs = [g.randbelow(7) for _ in range(2000)]
    assert set(xs) == set(range(7))
    assert all(3 <= g.randint(3, 5) <= 5 for _ in range(200))
    assert all(0 <= g.random() < 1 for _ in range(200))


def test_unit_disc_rejection_rate():
    g = SplitMix64(11)
    pts = [g.unit_disc() for _ in range(4000)]
    assert all(abs(z) <= 1 for z in pts)
    # two uniforms per attempt, acceptance pi/4
    h = SplitMix64(11)
    draws = 0
    for _ in range(4000):
        while True:
            draws += 1
            x, y = 2 * h.random() - 1, 2 * h.random() - 1
            if x * x + y * y <= 1:
                break
    assert abs(4000 / draws - math.pi / 4) < 0.03


def test_split_is_deterministic():
    a, b = SplitMix64(3), SplitMix64(3)
    ca, cb = a.split(), b.split()
    assert ca.next_u64() == cb.next_u64()
    assert a.next_u64() == b.next_u64()
