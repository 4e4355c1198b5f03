"""SplitMix64: a tiny seeded generator with a fixed, documented recurrence.

state += 0x9E3779B97F4A7C15
z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
z = (z ^ (z >> 27)) * 0x94D049BB133111EB
out = z ^ (z >> 31)                         (all arithmetic mod 2**64)

Bounded integers use rejection sampling on the top of the 64-bit range, so
the stream of draws is reproducible in any language from these constants.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

from .poly import Scalar, scalar

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

T = TypeVar("T")


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def nonzero_int(self, bound: int) -> int:
        v = self.randint(1, bound)
        return v if self.below(2) else -v

    def rational(self, num_bound: int = 5, den_bound: int = 3) -> Scalar:
        return scalar(self.randint(-num_bound, num_bound)) / self.randint(1, den_bound)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())
