"""Deterministic per-address random draws.

Tree labels must be reproducible from a single 64-bit seed, identical no
matter in which order nodes are visited, and portable across platforms.
Instead of advancing one sequential stream, every address owns a state
derived by hashing the seed and the path components through splitmix64
(Steele, Lea, Flood 2014). One extra mixing round turns the state into a
uniform double in [0, 1).
"""
from __future__ import annotations

from bisect import bisect_right
from typing import Sequence, Tuple

Address = Tuple[int, ...]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_CHILD_SALT = 0xD1B54A32D192ED03


def splitmix64(z: int) -> int:
    """One splitmix64 round: advance by the golden gamma and finalize."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def address_state(seed: int, path: Sequence[int]) -> int:
    """Hash state for an address: fold each path component into the seed state."""
    state = splitmix64(seed & _MASK64)
    for component in path:
        state = splitmix64(state ^ ((component * _CHILD_SALT) & _MASK64))
    return state


def unit_uniform(state: int) -> float:
    """Map a 64-bit state to a double in [0, 1) using the top 53 bits."""
    return (splitmix64(state) >> 11) * (1.0 / (1 << 53))


class LabelSampler:
    """Draws i.i.d. letter indices, one independent draw per tree address.

    The draw at an address depends only on (seed, address), so sampling is
    order-independent and safe to replay from any traversal.
    """

    def __init__(self, probs: Sequence[float], seed: int):
        self.seed = seed & _MASK64
        cum = []
        total = 0.0
        for p in probs:
            total += p
            cum.append(total)
        self._cum = cum

    def uniform_at(self, path: Sequence[int]) -> float:
        return unit_uniform(address_state(self.seed, path))

    def letter_at(self, path: Sequence[int]) -> int:
        u = self.uniform_at(path)
        idx = bisect_right(self._cum, u)
        return min(idx, len(self._cum) - 1)
