"""Deterministic 64-bit generator used by every stochastic component.

SplitMix64: the state advances by a fixed odd increment and each output is a
multiply-xor finalization of the state.  Period 2^64, one draw per step, and
the whole generator is a pair of pure functions on integers, so walk states
can carry their generator as a plain int.  The numba kernels in _kernels.py
implement the identical update; tests assert bit-for-bit agreement.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

#: scale turning the top 53 bits of a draw into a float in [0, 1)
_INV_2_53 = 1.0 / float(1 << 53)


def next_state(state: int) -> int:
    """Advance the generator state by exactly one draw."""
    return (state + _GAMMA) & MASK64


def finalize(state: int) -> int:
    """Multiply-xor output function; maps a state to its 64-bit output word."""
    z = state & MASK64
    z ^= z >> 30
    z = (z * _MIX1) & MASK64
    z ^= z >> 27
    z = (z * _MIX2) & MASK64
    z ^= z >> 31
    return z


def unit_float(word: int) -> float:
    """Top 53 bits of an output word as a float in [0, 1)."""
    return (word >> 11) * _INV_2_53


def draw(state: int) -> tuple[int, float]:
    """One generator step: returns (new_state, uniform in [0, 1))."""
    s = next_state(state)
    return s, unit_float(finalize(s))


def mix_seed(base_seed: int, run_index: int) -> int:
    """Per-run seed for batch runs: a multiply-xor hash of (base_seed, run_index).

    Sequential seeds would start nearby states of the same stream; hashing the
    pair decorrelates the streams.  run_index is offset by one so run 0 does
    not collapse to the base seed.
    """
    if run_index < 0:
        raise ValueError("run_index must be nonnegative")
    x = (base_seed ^ ((run_index + 1) * _GAMMA)) & MASK64
    return finalize(x)
