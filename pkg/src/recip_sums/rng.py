"""SplitMix64: a 64-bit splittable mixing generator.

Pure integer arithmetic, so streams are identical on every platform.  With
seed 0 the first four outputs are::

    0xE220A8397B1DCDAF 0x6E789E6AA1B965F4 0x06C45D188009454F 0xF88BB8A8724C81EC
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def unit_disc(self) -> complex:
        # rejection from [-1,1)^2; acceptance probability pi/4
        while True:
            x = 2.0 * self.random() - 1.0
            y = 2.0 * self.random() - 1.0
            if x * x + y * y <= 1.0:
                return complex(x, y)

    def split(self) -> "SplitMix64":
        """Independent child stream; advances this generator by one step."""
        return SplitMix64(mix64(self.next_u64() ^ GOLDEN_GAMMA))


def rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)
