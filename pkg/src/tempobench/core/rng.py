"""Portable pseudo-random streams.

Every random draw in the package goes through :class:`Prng` so that a seed
fully determines an experiment, independently of numpy's generator versions.

The core is SplitMix64.  Because SplitMix64 is counter based (the k-th word
only depends on ``seed + k * GAMMA``), bulk draws are computed in vectorised
form and are bit-identical to the equivalent sequence of scalar calls.
"""

import numpy as np

__all__ = ["Prng", "splitmix64_mix", "fnv1a_64", "derive_seed", "MASK64"]

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_TWO_PI = 2.0 * np.pi
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64_mix(z):
    """SplitMix64 output scramble of a single 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def _mix_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def derive_seed(*fields) -> int:
    """Hash an ordered tuple of fields into a 64-bit seed.

    Fields are rendered with ``str`` (integers are first reduced modulo 2**64),
    joined with the unit separator byte ``0x1F``, UTF-8 encoded, hashed with
    FNV-1a 64 and finally passed through one SplitMix64 scramble.
    """
    parts = []
    for f in fields:
        if isinstance(f, (int, np.integer)) and not isinstance(f, bool):
            f = int(f) & MASK64
        parts.append(str(f))
    return splitmix64_mix(fnv1a_64("\x1f".join(parts).encode("utf-8")))


def _box_muller(u1, u2):
    r = np.sqrt(-2.0 * np.log1p(-u1))
    theta = _TWO_PI * u2
    return r * np.cos(theta), r * np.sin(theta)


class Prng:
    """A single-owner SplitMix64 stream.

    Parameters
    ----------
    seed : int
        Any integer; reduced modulo 2**64.

    Notes
    -----
    ``next_uniform`` takes the top 53 bits of a word, giving a value in
    [0, 1).  ``next_int(lo, hi)`` is ``lo + floor(u * (hi - lo + 1))``, which
    is rejection free and has a bias of at most ``(hi - lo + 1) / 2**53``.
    Gaussians come from Box-Muller on two consecutive uniforms; the second
    value of each pair is cached and returned by the next gaussian call.
    """

    def __init__(self, seed=0):
        self.state = int(seed) & MASK64
        self._cached_gaussian = None

    def __repr__(self):
        return f"Prng(state={self.state:#018x})"

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def u64_array(self, size: int) -> np.ndarray:
        """The next ``size`` raw words, as a uint64 array."""
        if size < 0:
            raise ValueError("size must be non-negative")
        steps = np.arange(1, size + 1, dtype=np.uint64) * np.uint64(GAMMA)
        words = _mix_array(steps + np.uint64(self.state))
        self.state = (self.state + size * GAMMA) & MASK64
        return words

    def next_uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform_array(self, size: int) -> np.ndarray:
        return (self.u64_array(size) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` (both inclusive)."""
        if lo > hi:
            raise ValueError(f"empty integer range [{lo}, {hi}]")
        span = hi - lo + 1
        return min(hi, lo + int(self.next_uniform() * span))

    def int_array(self, lo: int, hi: int, size: int) -> np.ndarray:
        if lo > hi:
            raise ValueError(f"empty integer range [{lo}, {hi}]")
        span = hi - lo + 1
        out = lo + np.floor(self.uniform_array(size) * span).astype(np.int64)
        return np.minimum(out, hi)

    def next_gaussian(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        if sigma < 0:
            raise ValueError("sigma must be non-negative")
        return float(mu + sigma * self._standard_normals(1)[0])

    def gaussian_array(self, size: int, mu: float = 0.0, sigma: float = 1.0) -> np.ndarray:
        """``size`` draws equal to ``size`` consecutive ``next_gaussian`` calls."""
        if sigma < 0:
            raise ValueError("sigma must be non-negative")
        return mu + sigma * self._standard_normals(size)

    def _standard_normals(self, size):
        out = np.empty(size, dtype=np.float64)
        if size == 0:
            return out
        start = 0
        if self._cached_gaussian is not None:
            out[0] = self._cached_gaussian
            self._cached_gaussian = None
            start = 1
        remaining = size - start
        if remaining == 0:
            return out
        n_pairs = (remaining + 1) // 2
        u = self.uniform_array(2 * n_pairs)
        z0, z1 = _box_muller(u[0::2], u[1::2])
        pairs = np.empty(2 * n_pairs, dtype=np.float64)
        pairs[0::2] = z0
        pairs[1::2] = z1
        out[start:] = pairs[:remaining]
        if remaining % 2 == 1:
            self._cached_gaussian = float(pairs[-1])
        return out

    def shuffle(self, seq):
        """Fisher-Yates shuffle, last index downward; returns a new list."""
        items = list(seq)
        for i in range(len(items) - 1, 0, -1):
            j = self.next_int(0, i)
            items[i], items[j] = items[j], items[i]
        return items
