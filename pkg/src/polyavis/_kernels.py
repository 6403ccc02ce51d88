"""Compiled hot loops: walk simulators, occupancy samplers, Mobius block sieve.

Everything here is deterministic given its arguments.  The inline SplitMix64
update mirrors rng.py exactly (same constants, same draw order, same float
conversion), which is covered by a cross-implementation test.  All uint64
arithmetic wraps mod 2^64 by construction.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / float(1 << 53)


@njit(cache=True, nogil=True, inline="always")
def _next_unit(state):
    """Advance SplitMix64 state, return (state, uniform float in [0,1))."""
    state = state + _GAMMA
    z = state
    z ^= z >> _S30
    z *= _MIX1
    z ^= z >> _S27
    z *= _MIX2
    z ^= z >> _S31
    return state, np.float64(z >> _S11) * _INV_2_53


@njit(cache=True, nogil=True, inline="always")
def _gcd_is_one(pos, k):
    """gcd(pos[0..k-1]) == 1, folding left with early exit."""
    g = pos[0]
    for r in range(1, k):
        b = pos[r]
        while b != 0:
            g, b = b, g % b
        if g == 1:
            return True
    return g == 1


@njit(cache=True, nogil=True)
def walk_perturbed(p0, beta, n_steps, seed):
    """Run the coordinate-reinforced walk with offsets beta for n_steps.

    Direction r is drawn with probability (pos[r]+beta[r])/sum(pos) by
    inverse CDF on one uniform per step.  Returns (number of steps landing on
    a point with coprime coordinates, final position).
    """
    k = p0.shape[0]
    pos = p0.copy()
    total = np.int64(0)
    for r in range(k):
        total += pos[r]
    state = seed
    visible = np.int64(0)
    for _ in range(n_steps):
        state, v = _next_unit(state)
        denom = np.float64(total)
        acc = 0.0
        chosen = k - 1
        for r in range(k - 1):
            acc += (np.float64(pos[r]) + beta[r]) / denom
            if v < acc:
                chosen = r
                break
        pos[chosen] += 1
        total += 1
        if _gcd_is_one(pos, k):
            visible += 1
    return visible, pos


@njit(cache=True, nogil=True)
def walk_twisted(q0, gamma, n_steps, seed):
    """Same loop with direction weights gamma[r] . pos / sum(pos)."""
    k = q0.shape[0]
    pos = q0.copy()
    total = np.int64(0)
    for r in range(k):
        total += pos[r]
    state = seed
    visible = np.int64(0)
    for _ in range(n_steps):
        state, v = _next_unit(state)
        denom = np.float64(total)
        acc = 0.0
        chosen = k - 1
        for r in range(k - 1):
            dot = 0.0
            for j in range(k):
                dot += gamma[r, j] * np.float64(pos[j])
            acc += dot / denom
            if v < acc:
                chosen = r
                break
        pos[chosen] += 1
        total += 1
        if _gcd_is_one(pos, k):
            visible += 1
    return visible, pos


@njit(cache=True, nogil=True)
def occupancy_counts_perturbed(p0, beta, n, n_samples, seed):
    """Histogram of the step-n position over n_samples independent walks.

    The returned flat array is indexed by the first k-1 step counts in base
    (n+1): idx = u_1*(n+1)^(k-2) + ... + u_{k-1}.
    """
    k = p0.shape[0]
    size = 1
    for _ in range(k - 1):
        size *= n + 1
    counts = np.zeros(size, dtype=np.int64)
    pos = np.empty(k, dtype=np.int64)
    state = seed
    for _ in range(n_samples):
        total = np.int64(0)
        for r in range(k):
            pos[r] = p0[r]
            total += pos[r]
        for _ in range(n):
            state, v = _next_unit(state)
            denom = np.float64(total)
            acc = 0.0
            chosen = k - 1
            for r in range(k - 1):
                acc += (np.float64(pos[r]) + beta[r]) / denom
                if v < acc:
                    chosen = r
                    break
            pos[chosen] += 1
            total += 1
        idx = np.int64(0)
        for r in range(k - 1):
            idx = idx * (n + 1) + (pos[r] - p0[r])
        counts[idx] += 1
    return counts


@njit(cache=True, nogil=True)
def mobius_block(lo, length, primes, mu, val):
    """Fill mu[i] with the Mobius function of lo+i for i in [0, length).

    primes must contain every prime <= sqrt(lo+length-1).  val is int64
    scratch of the same length.  Standard segmented sieve: flip the sign per
    distinct small prime, zero on square divisors, then one extra flip when a
    prime factor larger than the sieving bound remains.
    """
    for i in range(length):
        mu[i] = 1
        val[i] = 1
    for t in range(primes.shape[0]):
        p = primes[t]
        start = ((lo + p - 1) // p) * p - lo
        for j in range(start, length, p):
            mu[j] = -mu[j]
            val[j] *= p
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2 - lo
        for j in range(start2, length, p2):
            mu[j] = 0
    for i in range(length):
        if mu[i] != 0 and val[i] != lo + i:
            mu[i] = -mu[i]


@njit(cache=True)
def divisor_counts(limit):
    """tau(m) for m in [0, limit], by harmonic divisor marking."""
    tau = np.zeros(limit + 1, dtype=np.int32)
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            tau[m] += 1
    return tau


@njit(cache=True, parallel=True)
def mobius_power_sum(limit, k, primes, block):
    """sum_{d<=limit} mu(d)/d^k, sieving in independent blocks of size block.

    Per-block partial sums are Kahan-compensated and then combined in block
    order, so the result does not depend on the number of threads.
    """
    n_blocks = (limit + block - 1) // block
    partials = np.zeros(n_blocks, dtype=np.float64)
    for b in prange(n_blocks):
        lo = 1 + b * block
        length = min(block, limit - lo + 1)
        mu = np.empty(length, dtype=np.int8)
        val = np.empty(length, dtype=np.int64)
        mobius_block(lo, length, primes, mu, val)
        total = 0.0
        comp = 0.0
        for i in range(length):
            m = mu[i]
            if m != 0:
                d = np.float64(lo + i)
                term = np.float64(m) / d**k
                y = term - comp
                t = total + y
                comp = (t - total) - y
                total = t
        partials[b] = total
    acc = 0.0
    comp = 0.0
    for b in range(n_blocks):
        y = partials[b] - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc
