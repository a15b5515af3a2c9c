"""Multi-indices alpha in N_0^d and their arithmetic."""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from typing import NamedTuple

import numpy as np


class MultiIndex(NamedTuple):
    """Exponent vector of a monomial xi^alpha.

    Tuples order lexicographically, which is the canonical term order used for
    serialization and hashing.
    """

    entries: tuple[int, ...]

    @classmethod
    def of(cls, entries: tuple[int, ...] | list[int]) -> MultiIndex:
        """Build a multi-index, rejecting negative or empty entries."""
        values = tuple(int(a) for a in entries)
        if not values:
            raise ValueError("multi-index needs d >= 1 entries")
        if any(a < 0 for a in values):
            raise ValueError(f"multi-index entries must be non-negative, got {values}")
        return cls(values)

    @classmethod
    def unit(cls, d: int, j: int, power: int = 1) -> MultiIndex:
        """power * e_j in dimension d."""
        entries = [0] * d
        entries[j] = power
        return cls(tuple(entries))

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def modulus(self) -> int:
        return sum(self.entries)

    def __add__(self, other: object) -> MultiIndex:  # type: ignore[override]
        if not isinstance(other, MultiIndex):
            return NotImplemented
        if other.d != self.d:
            raise ValueError("cannot add multi-indices of different dimension")
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries, strict=True)))

    def monomial(self, xis: np.ndarray) -> np.ndarray:
        """Evaluate xi^alpha for a batch of frequencies of shape (N, d)."""
        out = np.ones(xis.shape[0], dtype=xis.dtype)
        for axis, power in enumerate(self.entries):
            if power:
                out = out * xis[:, axis] ** power
        return out

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.entries) + ")"


def multi_indices(d: int, k: int) -> Iterator[MultiIndex]:
    """All multi-indices of modulus exactly k in dimension d, lexicographically descending."""
    for combo in itertools.combinations_with_replacement(range(d), k):
        entries = [0] * d
        for axis in combo:
            entries[axis] += 1
        yield MultiIndex(tuple(entries))
