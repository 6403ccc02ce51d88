"""Exact finite-n laws of the perturbed walk, and visibility expectations.

The position after n steps is p_0 + u where u counts the jumps per direction.
Exchangeability gives the closed form

    P(p_n = p_0 + u) = multinomial(n; u) * Beta(a + u) / Beta(a),

with a = p_0 + beta and Beta the multivariate Beta function.  Everything is
evaluated in log space through lgamma.  dp_oracle recomputes the same laws by
brute-force forward propagation of the literal step probabilities and is the
independent cross-check (and the only exact method for twisted walks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .lattice import LatticePoint, is_visible
from .numtheory import mobius_divisor_sum
from .walks import PerturbedConfig, TwistConfig, WalkConfig, step_probabilities

#: occupancy tables refuse to materialize more entries than this
MAX_TABLE_ENTRIES = 10_000_000

#: forward-propagation step limits keeping the DP state space small
DP_STEP_LIMITS = {2: 64, 3: 24}

#: laws must renormalize to 1 within this tolerance
NORMALIZATION_TOL = 1e-12


class SizeLimitError(ValueError):
    """Requested exact computation exceeds its declared size guard."""


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def log_multivariate_beta(b: Sequence[float]) -> float:
    """log Beta(b) = sum_m log Gamma(b_m) - log Gamma(sum_m b_m)."""
    vals = [float(x) for x in b]
    if len(vals) < 2:
        raise ValueError("Beta needs at least two parameters")
    for x in vals:
        if not x > 0:
            raise ValueError(f"Beta parameters must be positive, got {x}")
    return math.fsum(math.lgamma(x) for x in vals) - math.lgamma(math.fsum(vals))


def log_multinomial(n: int, u: Sequence[int]) -> float:
    """log of n! / (u_1! ... u_k!) for a composition u of n."""
    if sum(u) != n:
        raise ValueError(f"u must sum to n={n}, got {sum(u)}")
    if any(x < 0 for x in u):
        raise ValueError("counts must be nonnegative")
    return math.lgamma(n + 1) - math.fsum(math.lgamma(x + 1) for x in u)


def _dirichlet_params(cfg: PerturbedConfig) -> tuple[float, ...]:
    return tuple(float(c) + b for c, b in zip(cfg.p0, cfg.beta))


def occupancy_probability(n: int, u: Sequence[int], cfg: PerturbedConfig) -> float:
    """P(p_n = p_0 + u) for the perturbed walk."""
    if n < 0:
        raise ValueError("n must be >= 0")
    u = tuple(int(x) for x in u)
    if len(u) != cfg.k:
        raise ValueError(f"u has dimension {len(u)}, config has k={cfg.k}")
    if n == 0:
        return 1.0 if all(x == 0 for x in u) else 0.0
    a = _dirichlet_params(cfg)
    log_p = (
        log_multinomial(n, u)
        + log_multivariate_beta([x + y for x, y in zip(a, u)])
        - log_multivariate_beta(a)
    )
    return math.exp(log_p)


@dataclass(frozen=True)
class OccupancyTable:
    """Full law of the step-count vector u after n steps."""

    n: int
    k: int
    entries: dict[LatticePoint, float]

    def __post_init__(self):
        total = math.fsum(self.entries.values())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ArithmeticError(f"occupancy law sums to {total!r}, expected 1")

    def probability(self, u: Sequence[int]) -> float:
        return self.entries.get(tuple(int(x) for x in u), 0.0)


def occupancy_table(n: int, cfg: PerturbedConfig) -> OccupancyTable:
    """The law of p_n - p_0 over all compositions of n into k parts."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = cfg.k
    n_entries = math.comb(n + k - 1, k - 1)
    if n_entries > MAX_TABLE_ENTRIES:
        raise SizeLimitError(f"occupancy table would hold {n_entries} entries")
    a = _dirichlet_params(cfg)
    log_beta_a = log_multivariate_beta(a)
    entries = {}
    for u in compositions(n, k):
        log_p = (
            log_multinomial(n, u)
            + log_multivariate_beta([x + y for x, y in zip(a, u)])
            - log_beta_a
        )
        entries[u] = math.exp(log_p)
    return OccupancyTable(n=n, k=k, entries=entries)


def pair_occupancy_probability(
    n: int, m: int, u: Sequence[int], v: Sequence[int], cfg: PerturbedConfig
) -> float:
    """P(p_n = p_0 + u and p_m = p_n + v) for m > n >= 1.

    Joint law of the first n and the following m-n jumps: two multinomial
    weights against a single Beta ratio with the cumulative counts u + v.
    """
    if not m > n >= 1:
        raise ValueError("need m > n >= 1")
    u = tuple(int(x) for x in u)
    v = tuple(int(x) for x in v)
    if len(u) != cfg.k or len(v) != cfg.k:
        raise ValueError("u and v must have the config dimension")
    a = _dirichlet_params(cfg)
    log_p = (
        log_multinomial(n, u)
        + log_multinomial(m - n, v)
        + log_multivariate_beta([x + y + z for x, y, z in zip(a, u, v)])
        - log_multivariate_beta(a)
    )
    return math.exp(log_p)


def dp_oracle(n: int, cfg: WalkConfig) -> OccupancyTable:
    """Law of p_n by forward probability propagation over positions.

    Applies the literal per-step probabilities, so it is independent of the
    closed-form route (which never sees the step order).  Works for both walk
    families; state counts limit it to short horizons.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = cfg.k
    limit = DP_STEP_LIMITS.get(k, 12)
    if n > limit:
        raise SizeLimitError(f"dp_oracle limited to n <= {limit} for k={k}")
    from .walks import WalkState, _start_point

    start = _start_point(cfg)
    dist: dict[LatticePoint, float] = {start: 1.0}
    for step in range(n):
        nxt: dict[LatticePoint, float] = {}
        for pos, mass in dist.items():
            probs = step_probabilities(WalkState(pos, step, 0), cfg)
            for r, w in enumerate(probs):
                if w == 0.0:
                    continue
                moved = list(pos)
                moved[r] += 1
                key = tuple(moved)
                nxt[key] = nxt.get(key, 0.0) + mass * w
        dist = nxt
    entries = {
        tuple(p - s for p, s in zip(pos, start)): mass for pos, mass in dist.items()
    }
    return OccupancyTable(n=n, k=k, entries=entries)


class VisibilityExpectation(NamedTuple):
    """Exact E(V_n), its Mobius main term, and the residual."""

    exact: float
    main_term: float
    difference: float


def expected_visible(n: int, cfg: PerturbedConfig) -> VisibilityExpectation:
    """E(V_n) = P(p_n visible), summed over visible outcomes of the exact law.

    The main term is sum_{d | n+s(p_0)} mu(d)/d^(k-1); the residual shrinks
    as n grows.
    """
    table = occupancy_table(n, cfg)
    exact = math.fsum(
        p
        for u, p in table.entries.items()
        if is_visible(tuple(c + x for c, x in zip(cfg.p0, u)))
    )
    main = mobius_divisor_sum(n + sum(cfg.p0), cfg.k)
    return VisibilityExpectation(exact=exact, main_term=main, difference=exact - main)


class PairVisibilityExpectation(NamedTuple):
    """Exact E(V_n V_m), the product of the two main terms, and the residual."""

    exact: float
    main_term_product: float
    difference: float


#: pair enumeration guard: (outcomes at n) * (outcomes at m-n)
MAX_PAIR_ENTRIES = 1_000_000


def pair_expected_visible(n: int, m: int, cfg: PerturbedConfig) -> PairVisibilityExpectation:
    """E(V_n V_m) = P(p_n and p_m both visible), by double enumeration."""
    if not m > n >= 1:
        raise ValueError("need m > n >= 1")
    k = cfg.k
    size = math.comb(n + k - 1, k - 1) * math.comb(m - n + k - 1, k - 1)
    if size > MAX_PAIR_ENTRIES:
        raise SizeLimitError(f"pair enumeration would visit {size} outcomes")
    a = _dirichlet_params(cfg)
    log_beta_a = log_multivariate_beta(a)
    terms = []
    for u in compositions(n, k):
        first = tuple(c + x for c, x in zip(cfg.p0, u))
        if not is_visible(first):
            continue
        log_mult_u = log_multinomial(n, u)
        for v in compositions(m - n, k):
            second = tuple(c + x for c, x in zip(first, v))
            if not is_visible(second):
                continue
            log_p = (
                log_mult_u
                + log_multinomial(m - n, v)
                + log_multivariate_beta(
                    [x + y + z for x, y, z in zip(a, u, v)]
                )
                - log_beta_a
            )
            terms.append(math.exp(log_p))
    s0 = sum(cfg.p0)
    main = mobius_divisor_sum(n + s0, k) * mobius_divisor_sum(m + s0, k)
    exact = math.fsum(terms)
    return PairVisibilityExpectation(
        exact=exact, main_term_product=main, difference=exact - main
    )
