"""Lattice points, their coordinate sum, and the coprimality visibility test.

A lattice point is any sequence of nonnegative integers; functions here treat
it as an immutable value.  A point with at least one positive coordinate is
visible from the origin exactly when the gcd of its coordinates is 1.
"""

from __future__ import annotations

import math
from typing import Sequence

#: coordinates are kept within signed 64-bit range so the compiled walk
#: kernels can hold positions without overflow
INT64_MAX = (1 << 63) - 1

LatticePoint = tuple[int, ...]


def as_point(coords: Sequence[int]) -> LatticePoint:
    """Validate and normalize coordinates into a lattice point tuple."""
    point = tuple(int(c) for c in coords)
    if len(point) < 2:
        raise ValueError("lattice points need dimension k >= 2")
    for c in point:
        if c < 0:
            raise ValueError(f"negative coordinate {c}")
        if c > INT64_MAX:
            raise OverflowError(f"coordinate {c} exceeds 64-bit range")
    return point


def component_sum(point: Sequence[int]) -> int:
    """Sum of the coordinates.  Raises instead of wrapping on 64-bit overflow."""
    total = 0
    for c in point:
        total += c
    if total > INT64_MAX:
        raise OverflowError(f"component sum {total} exceeds 64-bit range")
    return total


def is_visible(point: Sequence[int]) -> bool:
    """True when gcd of all coordinates is 1.

    Folds gcd left to right and stops as soon as the running gcd hits 1.
    The all-zero point has no well-defined gcd and is rejected.
    """
    g = 0
    for c in point:
        g = math.gcd(g, c)
        if g == 1:
            return True
    if g == 0:
        raise ValueError("visibility undefined for the all-zero point")
    return False
