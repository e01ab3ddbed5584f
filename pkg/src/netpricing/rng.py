"""Deterministic 64-bit PRNG for instance generation.

The algorithm is pinned here, not delegated to a library, because it is
part of the instance-format contract: a (seed, parameters) pair must
regenerate the same instance bytes on any platform and interpreter.

Seeding
    A 64-bit seed feeds splitmix64; its first four outputs become the
    xoshiro256** state. An all-zero state (impossible from splitmix64,
    kept as a guard) is replaced with a fixed nonzero constant.

Streams
    next_u64()        xoshiro256** output, 64 bits.
    random()          top 53 bits of next_u64, scaled to [0, 1).
    randbelow(n)      unbiased via rejection: draw u64, reject values at
                      or above floor(2^64 / n) * n, reduce mod n.
    uniform(lo, hi)   lo + random() * (hi - lo).

derive_seed(master, *path) chains the splitmix64 finalizer over the path
entries, giving independent child seeds for indexed sub-streams.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + _GOLDEN) & _MASK64
    return state, _mix64(state)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from a master seed and an index path."""
    x = _mix64(master & _MASK64)
    for part in path:
        x = _mix64(x ^ _mix64((part + _GOLDEN) & _MASK64))
    return x


class Rng:
    """xoshiro256** seeded through splitmix64."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state, word = _splitmix64(state)
            s.append(word)
        if not any(s):
            s[0] = _GOLDEN
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = ((1 << 64) // n) * n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def uniform(self, lo: float, hi: float) -> float:
        return lo + self.random() * (hi - lo)
