"""Seedable xorshift64* generator.

Algorithm (so ports in other languages reproduce the same streams)::

    state = seed or 0x9E3779B97F4A7C15      (64-bit, never zero)
    next():
        x ^= x >> 12; x ^= x << 25; x ^= x >> 27      (all mod 2**64)
        return (x * 0x2545F4914F6CDD1D) mod 2**64

``randrange(k)`` returns ``next() % k``; ``random()`` returns
``(next() >> 11) / 2**53``.
"""

MASK = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D
DEFAULT_STATE = 0x9E3779B97F4A7C15


class XorShift64:
    def __init__(self, seed: int = 1):
        self.state = (seed & MASK) or DEFAULT_STATE

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK

    def randrange(self, k: int) -> int:
        if k <= 0:
            raise ValueError("randrange needs a positive bound")
        return self.next_u64() % k

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]`` inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def sample(self, seq, k: int) -> list:
        pool = list(seq)
        out = []
        for _ in range(min(k, len(pool))):
            out.append(pool.pop(self.randrange(len(pool))))
        return out

    def fork(self, salt: int) -> "XorShift64":
        return XorShift64(self.next_u64() ^ (salt * 0xBF58476D1CE4E5B9 & MASK))
