"""Measurable subsets of X = [0,1] as finite unions of half-open intervals.

An :class:`IntervalSet` is a sorted tuple of disjoint intervals ``[a, b)``
inside ``[0, 1]``.  Random sets are drawn on a dyadic grid of resolution
``2**-GRID_BITS`` so that all set algebra (union, intersection, complement,
difference) and Lebesgue measure stay exact in double precision; prefix cuts
produced by distortion inverses may land off the grid, which is fine for the
1e-9 tolerances downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import StructuralError

GRID_BITS = 20  # default dyadic resolution for generated sets


def snap(x: float, bits: int = GRID_BITS) -> float:
    """Round to the dyadic grid 2**-bits."""
    scale = float(1 << bits)
    return round(x * scale) / scale


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint half-open subintervals of [0,1]."""

    intervals: tuple[tuple[float, float], ...]

    def __init__(self, intervals=()):
        pairs = [(float(a), float(b)) for a, b in intervals]
        for a, b in pairs:
            if not (0.0 <= a < b <= 1.0):
                raise StructuralError(f"bad interval [{a}, {b}): need 0 <= a < b <= 1")
        pairs.sort()
        merged: list[list[float]] = []
        for a, b in pairs:
            if merged and a < merged[-1][1]:
                raise StructuralError(f"overlapping intervals at [{a}, {b})")
            if merged and a == merged[-1][1]:
                merged[-1][1] = b  # touching intervals merge canonically
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    # -- constructors -------------------------------------------------

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def full() -> "IntervalSet":
        return IntervalSet(((0.0, 1.0),))

    @staticmethod
    def interval(a: float, b: float) -> "IntervalSet":
        return IntervalSet(((a, b),))

    # -- basic queries -------------------------------------------------

    @property
    def lebesgue(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains_point(self, x: float) -> bool:
        return any(a <= x < b for a, b in self.intervals)

    def is_subset_of(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def to_pairs(self) -> list[list[float]]:
        return [[a, b] for a, b in self.intervals]

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __repr__(self) -> str:
        body = " ∪ ".join(f"[{a:g},{b:g})" for a, b in self.intervals)
        return f"IntervalSet({body or '∅'})"

    # -- set algebra ----------------------------------------------------

    def complement(self) -> "IntervalSet":
        out = []
        cursor = 0.0
        for a, b in self.intervals:
            if cursor < a:
                out.append((cursor, a))
            cursor = b
        if cursor < 1.0:
            out.append((cursor, 1.0))
        return IntervalSet(out)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        mine, theirs = self.intervals, other.intervals
        while i < len(mine) and j < len(theirs):
            a = max(mine[i][0], theirs[j][0])
            b = min(mine[i][1], theirs[j][1])
            if a < b:
                out.append((a, b))
            if mine[i][1] <= theirs[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        merged: list[list[float]] = []
        for a, b in sorted(self.intervals + other.intervals):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return IntervalSet((a, b) for a, b in merged)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersection(other.complement())

    # -- prefix chains ----------------------------------------------------

    def prefix(self, length: float) -> "IntervalSet":
        """Left prefix of this set with total Lebesgue measure ``length``."""
        total = self.lebesgue
        if length <= 0.0:
            return IntervalSet.empty()
        if length >= total - 1e-15:
            return self
        out = []
        remaining = length
        for a, b in self.intervals:
            w = b - a
            if w <= remaining:
                out.append((a, b))
                remaining -= w
            else:
                if a + remaining > a:  # guard against float-underflow slivers
                    out.append((a, a + remaining))
                break
        return IntervalSet(out)


@lru_cache(maxsize=64)
def uniform_partition(ncells: int) -> tuple[IntervalSet, ...]:
    """[0,1) split into ``ncells`` equal single-interval cells."""
    edges = np.linspace(0.0, 1.0, ncells + 1)
    return tuple(IntervalSet(((edges[i], edges[i + 1]),)) for i in range(ncells))


def random_interval_set(
    rng: np.random.Generator,
    max_intervals: int = 4,
    bits: int = GRID_BITS,
    allow_empty: bool = False,
) -> IntervalSet:
    """Random union of up to ``max_intervals`` disjoint dyadic intervals."""
    npieces = int(rng.integers(0 if allow_empty else 1, max_intervals + 1))
    if npieces == 0:
        return IntervalSet.empty()
    grid = 1 << bits
    cuts = rng.choice(grid + 1, size=2 * npieces, replace=False)
    cuts.sort()
    scale = float(grid)
    pairs = [(cuts[2 * i] / scale, cuts[2 * i + 1] / scale) for i in range(npieces)]
    return IntervalSet(pairs)
