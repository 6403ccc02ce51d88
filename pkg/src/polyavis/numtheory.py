"""Arithmetic kernel: Mobius function, divisor counts, 1/zeta(k), divisor sums.

The reciprocal zeta values come from the truncated series sum_d mu(d)/d^k,
with the cutoff chosen from the integral tail bound.  Divisor sums are exact
rationals (Fraction) so downstream comparisons at 1e-12 are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels

#: block length for segmented Mobius sieving; blocks are independent, so this
#: only trades memory against scheduling overhead
_SIEVE_BLOCK = 2_000_000


def _primes_upto(n: int) -> np.ndarray:
    """All primes <= n, as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass(frozen=True)
class ArithmeticSieve:
    """Bulk mu and tau values for 1..limit (index 0 is unused padding)."""

    limit: int
    mobius_values: np.ndarray  # int8, mobius_values[m] = mu(m)
    divisor_counts: np.ndarray  # int32, divisor_counts[m] = tau(m)

    def mu(self, m: int) -> int:
        if not 1 <= m <= self.limit:
            raise ValueError(f"m={m} outside sieve range 1..{self.limit}")
        return int(self.mobius_values[m])

    def tau(self, m: int) -> int:
        if not 1 <= m <= self.limit:
            raise ValueError(f"m={m} outside sieve range 1..{self.limit}")
        return int(self.divisor_counts[m])


def build_sieve(limit: int) -> ArithmeticSieve:
    """Sieve mu and tau up to limit (>= 1)."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    primes = _primes_upto(math.isqrt(limit))
    mu = np.zeros(limit + 1, dtype=np.int8)
    val = np.empty(limit, dtype=np.int64)
    block = np.empty(limit, dtype=np.int8)
    _kernels.mobius_block(1, limit, primes, block, val)
    mu[1:] = block
    tau = _kernels.divisor_counts(limit)
    tau[0] = 0
    return ArithmeticSieve(limit=limit, mobius_values=mu, divisor_counts=tau)


def mobius(n: int) -> int:
    """mu(n) by trial division; no sieve or precomputation required."""
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result = 1
    for p in (2, 3):
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            if n % p == 0:
                n //= p
                if n % p == 0:
                    return 0
                result = -result
        f += 6
    if n > 1:
        result = -result
    return result


def distinct_prime_factors(n: int) -> list[int]:
    """Distinct primes dividing n, ascending (trial division)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for p in (2, 3):
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            if n % p == 0:
                out.append(p)
                while n % p == 0:
                    n //= p
        f += 6
    if n > 1:
        out.append(n)
    return out


def series_cutoff(k: int, tail_tolerance: float) -> int:
    """Smallest D with D^(1-k)/(k-1) < tail_tolerance.

    The tail of sum mu(d)/d^k beyond D is at most sum_{d>D} d^-k, which the
    integral comparison bounds by D^(1-k)/(k-1).
    """
    if k < 2:
        raise ValueError("k must be >= 2 (the series diverges otherwise)")
    if not tail_tolerance > 0:
        raise ValueError("tail_tolerance must be positive")
    tol = Fraction(tail_tolerance)
    d = max(1, int(((k - 1) * tail_tolerance) ** (-1.0 / (k - 1))) - 2)
    while Fraction(1, (k - 1) * d ** (k - 1)) >= tol:
        d += 1
    return d


@lru_cache(maxsize=None)
def zeta_reciprocal(k: int, tail_tolerance: float = 1e-9) -> float:
    """1/zeta(k) via the truncated Mobius series, within tail_tolerance.

    Cached per (k, tolerance): the k=2 value at 1e-9 needs d up to ~1e9 and
    takes seconds, everything downstream shares one computation.
    """
    limit = series_cutoff(k, tail_tolerance)
    primes = _primes_upto(math.isqrt(limit))
    return float(_kernels.mobius_power_sum(limit, k, primes, _SIEVE_BLOCK))


def mobius_divisor_sum_exact(n: int, k: int) -> Fraction:
    """sum_{d | n} mu(d)/d^(k-1) as an exact rational.

    Only squarefree divisors contribute, so the sum factors over the distinct
    primes of n as prod_p (1 - p^(1-k)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    total = Fraction(1)
    for p in distinct_prime_factors(n):
        total *= 1 - Fraction(1, p ** (k - 1))
    return total


def mobius_divisor_sum(n: int, k: int) -> float:
    """Float value of the exact divisor sum sum_{d|n} mu(d)/d^(k-1)."""
    return float(mobius_divisor_sum_exact(n, k))


def density_main_term(N: int, k: int, s0: int) -> float:
    """G = sum_{1<=n<=N} sum_{d | n+s0} mu(d)/d^(k-1), exactly, as a float.

    Rearranged over d: the inner count of n in [1, N] with d | n+s0 is
    floor((N+s0)/d) - floor(s0/d).  Accumulated in exact rationals and
    converted once at the end.  G/N approaches 1/zeta(k) as N grows.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    if s0 < 1:
        raise ValueError("s0 must be >= 1")
    hi = N + s0
    primes = _primes_upto(math.isqrt(hi))
    mu = np.empty(hi, dtype=np.int8)
    val = np.empty(hi, dtype=np.int64)
    _kernels.mobius_block(1, hi, primes, mu, val)
    total = Fraction(0)
    for d in range(1, hi + 1):
        m = int(mu[d - 1])
        if m == 0:
            continue
        count = (N + s0) // d - s0 // d
        if count:
            total += Fraction(m * count, d ** (k - 1))
    return float(total)
