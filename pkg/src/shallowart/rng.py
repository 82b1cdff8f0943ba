"""Deterministic pseudo-random primitives: SplitMix64 and PCG32.

Every random decision in the package flows through these two generators so
that results are bit-reproducible across runs, platforms, and worker counts.
Sub-streams (one per image, one per output model) are derived with
``mix64(base_seed, index)``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1

_PCG_MULT = 6364136223846793005
_PCG_DEFAULT_SEQ = 0xDA3E39CB94B95BDB


def splitmix64(x: int) -> int:
    """One SplitMix64 finalizer step: a 64-bit bijective mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix64(base: int, index: int) -> int:
    """Derive the sub-stream seed for (base, index).

    Defined as ``splitmix64(splitmix64(base) + index)``; the outer finalizer
    is bijective, so distinct indices map to distinct seeds.
    """
    return splitmix64((splitmix64(base & MASK64) + (index & MASK64)) & MASK64)


class PCG32:
    """PCG-XSH-RR 64/32 generator.

    Seeding follows the reference ``pcg32_srandom`` sequence: zero the state,
    set the stream increment from ``seq``, advance once, add the seed,
    advance again.  Bounded draws use threshold rejection, so every value in
    ``[0, bound)`` is equally likely.
    """

    __slots__ = ("state", "inc")

    # mult powers a**k and geometric sums 1 + a + ... + a**(k-1), mod 2**64,
    # shared by all instances and grown on demand by _raw_block
    _a_pows = np.ones(1, dtype=np.uint64)
    _g_sums = np.zeros(1, dtype=np.uint64)

    def __init__(self, seed: int, seq: int = _PCG_DEFAULT_SEQ):
        self.state = 0
        self.inc = ((seq << 1) | 1) & MASK64
        self.next_u32()
        self.state = (self.state + (seed & MASK64)) & MASK64
        self.next_u32()

    def next_u32(self) -> int:
        """Return the next 32-bit output and advance the state."""
        old = self.state
        self.state = (old * _PCG_MULT + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & MASK32

    def bounded(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection below the bias threshold."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 32) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound

    def _raw_block(self, count: int) -> np.ndarray:
        """Vectorized batch of raw 32-bit outputs, identical to repeated next_u32.

        The LCG state recurrence is unrolled with precomputed multiplier and
        increment powers so the whole block comes from a handful of numpy
        passes.  The scalar state is left exactly where ``count`` sequential
        calls would leave it.
        """
        if count <= 0:
            return np.empty(0, dtype=np.uint64)
        cls = type(self)
        if cls._a_pows.size <= count:
            with np.errstate(over="ignore"):
                n_new = max(count + 1, 2 * cls._a_pows.size)
                a_pows = np.empty(n_new, dtype=np.uint64)
                g_sums = np.empty(n_new, dtype=np.uint64)
                a_pows[: cls._a_pows.size] = cls._a_pows
                g_sums[: cls._g_sums.size] = cls._g_sums
                mult = np.uint64(_PCG_MULT)
                for k in range(cls._a_pows.size, n_new):
                    g_sums[k] = g_sums[k - 1] + a_pows[k - 1]
                    a_pows[k] = a_pows[k - 1] * mult
            cls._a_pows = a_pows
            cls._g_sums = g_sums
        with np.errstate(over="ignore"):
            inc = np.uint64(self.inc)
            s0 = np.uint64(self.state)
            states = cls._a_pows[:count] * s0 + cls._g_sums[:count] * inc
            self.state = int(cls._a_pows[count] * s0 + cls._g_sums[count] * inc)
            xorshifted = (((states >> np.uint64(18)) ^ states) >> np.uint64(27)) & np.uint64(MASK32)
            rot = (states >> np.uint64(59)).astype(np.uint32)
            xs32 = xorshifted.astype(np.uint32)
            out = (xs32 >> rot) | (xs32 << ((np.uint32(32) - rot) & np.uint32(31)))
        return out.astype(np.uint64)

    def bounded_array(self, count: int, bound: int) -> np.ndarray:
        """``count`` bounded draws, bit-identical to calling bounded() in a loop."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 32) % bound
        accepted: list[np.ndarray] = []
        remaining = count
        while remaining > 0:
            block = self._raw_block(max(remaining + 8, 16))
            keep = block[block >= threshold]
            accepted.append(keep[:remaining])
            remaining -= min(remaining, keep.size)
        return (np.concatenate(accepted) % np.uint64(bound)).astype(np.int64)

    def sample_distinct(self, k: int, bound: int) -> np.ndarray:
        """First ``k`` distinct bounded draws from the stream, ascending order."""
        if k > bound:
            raise ValueError("cannot sample more distinct values than the bound")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < k:
            block = self.bounded_array(max(k - len(out), 8), bound)
            for v in block.tolist():
                if v not in seen:
                    seen.add(v)
                    out.append(v)
                    if len(out) == k:
                        break
        return np.sort(np.asarray(out, dtype=np.int64))

    def shuffled_indices(self, n: int) -> np.ndarray:
        """Permutation of range(n): argsort of fresh 32-bit keys (stable on ties)."""
        keys = self._raw_block(n)
        return np.argsort(keys, kind="stable")


def pcg_stream(base_seed: int, index: int) -> PCG32:
    """The generator for sub-stream ``index`` of ``base_seed``."""
    return PCG32(mix64(base_seed, index))
