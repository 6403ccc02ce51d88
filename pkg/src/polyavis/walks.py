"""Walk processes on Z^k: standard, coordinate-perturbed, and twisted.

All three walks jump by one unit basis vector per step.  The perturbed walk
draws direction r with probability (p_r + beta_r)/s(p); the twisted walk uses
(gamma_r . q)/s(q) with the gamma rows summing column-wise to the all-ones
vector.  The standard walk is the perturbed walk with beta = 0, B = 1.

Single walks are strictly sequential; batches fan independent seeded runs out
over a thread pool and reduce in run order, so results are identical at any
thread count.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels, rng
from .lattice import INT64_MAX, LatticePoint, as_point, component_sum, is_visible

#: configuration sums must close to this absolute tolerance
SUM_TOL = 1e-12


def _digest(parts: Sequence[object]) -> str:
    h = hashlib.sha256("|".join(repr(p) for p in parts).encode()).hexdigest()
    return h[:16]


@dataclass(frozen=True)
class PerturbedConfig:
    """Start point, perturbation vector, and bound B of a perturbed walk.

    Validation guarantees every reachable state has strictly positive step
    probabilities: |beta_r| < B <= p0_r forces p_r + beta_r > 0 along any
    trajectory, and the beta components cancel so the weights sum to s(p).
    """

    p0: LatticePoint
    beta: tuple[float, ...]
    B: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p0", as_point(self.p0))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if len(self.beta) != self.k:
            raise ValueError("beta and p0 must have the same dimension")
        if not self.B > 0:
            raise ValueError("B must be positive")
        if abs(sum(self.beta)) > SUM_TOL:
            raise ValueError(f"beta must sum to 0, got {sum(self.beta)!r}")
        for r, b in enumerate(self.beta):
            if not abs(b) < self.B:
                raise ValueError(f"|beta[{r}]| = {abs(b)} must be < B = {self.B}")
        for r, c in enumerate(self.p0):
            if c < self.B:
                raise ValueError(f"p0[{r}] = {c} must be >= B = {self.B}")

    @classmethod
    def standard(cls, p0: Sequence[int]) -> "PerturbedConfig":
        """The unperturbed walk from p0 (all coordinates >= 1)."""
        point = as_point(p0)
        return cls(p0=point, beta=(0.0,) * len(point), B=1.0)

    @property
    def k(self) -> int:
        return len(self.p0)

    @property
    def digest(self) -> str:
        return _digest(("perturbed", self.k, self.p0, self.beta, self.B))


@dataclass(frozen=True)
class TwistConfig:
    """Start point and direction-weight rows gamma_r of a twisted walk."""

    q0: LatticePoint
    gamma: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "q0", as_point(self.q0))
        rows = tuple(tuple(float(g) for g in row) for row in self.gamma)
        object.__setattr__(self, "gamma", rows)
        k = self.k
        if len(rows) != k or any(len(row) != k for row in rows):
            raise ValueError("gamma must be a k x k matrix")
        if any(c < 1 for c in self.q0):
            raise ValueError("q0 coordinates must be >= 1")
        for r, row in enumerate(rows):
            if all(g == 0.0 for g in row):
                raise ValueError(f"gamma row {r} is the zero vector")
            for j, g in enumerate(row):
                if not 0.0 <= g <= 1.0:
                    raise ValueError(f"gamma[{r}][{j}] = {g} outside [0, 1]")
        for j in range(k):
            col = sum(row[j] for row in rows)
            if abs(col - 1.0) > SUM_TOL:
                raise ValueError(f"gamma column {j} sums to {col!r}, expected 1")

    @property
    def k(self) -> int:
        return len(self.q0)

    @property
    def digest(self) -> str:
        return _digest(("twisted", self.k, self.q0, self.gamma))


WalkConfig = PerturbedConfig | TwistConfig


def _start_point(cfg: WalkConfig) -> LatticePoint:
    return cfg.p0 if isinstance(cfg, PerturbedConfig) else cfg.q0


@dataclass(frozen=True)
class WalkState:
    """Position after step_index jumps plus the generator state."""

    position: LatticePoint
    step_index: int
    rng_state: int


def initial_state(cfg: WalkConfig, seed: int) -> WalkState:
    return WalkState(position=_start_point(cfg), step_index=0, rng_state=seed & rng.MASK64)


def step_probabilities_perturbed(state: WalkState, cfg: PerturbedConfig) -> tuple[float, ...]:
    """((p_r + beta_r)/s(p))_r at the current position; strictly positive."""
    denom = float(component_sum(state.position))
    return tuple((float(c) + b) / denom for c, b in zip(state.position, cfg.beta))


def step_probabilities_twisted(state: WalkState, cfg: TwistConfig) -> tuple[float, ...]:
    """((gamma_r . q)/s(q))_r at the current position; nonnegative."""
    denom = float(component_sum(state.position))
    probs = []
    for row in cfg.gamma:
        dot = 0.0
        for g, c in zip(row, state.position):
            dot += g * float(c)
        probs.append(dot / denom)
    return tuple(probs)


def step_probabilities(state: WalkState, cfg: WalkConfig) -> tuple[float, ...]:
    if isinstance(cfg, PerturbedConfig):
        return step_probabilities_perturbed(state, cfg)
    return step_probabilities_twisted(state, cfg)


def advance(state: WalkState, probabilities: Sequence[float]) -> WalkState:
    """One jump by inverse CDF on the next generator draw.

    Accumulates the first k-1 probabilities and falls through to the last
    direction, the same arithmetic (and float rounding) as the compiled
    kernels, so trajectories agree bit for bit.
    """
    s = rng.next_state(state.rng_state)
    v = rng.unit_float(rng.finalize(s))
    k = len(probabilities)
    acc = 0.0
    chosen = k - 1
    for r in range(k - 1):
        acc += probabilities[r]
        if v < acc:
            chosen = r
            break
    pos = list(state.position)
    pos[chosen] += 1
    return WalkState(position=tuple(pos), step_index=state.step_index + 1, rng_state=s)


@dataclass(frozen=True)
class DensityEstimate:
    """Visible-step tally of one simulated walk."""

    visible_count: int
    total_steps: int
    seed: int
    config_digest: str

    @property
    def density(self) -> float:
        return self.visible_count / self.total_steps


def _check_capacity(cfg: WalkConfig, n_steps: int) -> None:
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    start = _start_point(cfg)
    if max(start) + n_steps > INT64_MAX or component_sum(start) + n_steps > INT64_MAX:
        raise OverflowError("walk would overflow 64-bit coordinates")


def simulate(cfg: WalkConfig, n_steps: int, seed: int) -> DensityEstimate:
    """Run n_steps from the start point and count visible steps p_1..p_N.

    The start point itself is not counted.  Deterministic in (cfg, n_steps,
    seed).
    """
    _check_capacity(cfg, n_steps)
    s = np.uint64(seed & rng.MASK64)
    if isinstance(cfg, PerturbedConfig):
        start = np.array(cfg.p0, dtype=np.int64)
        beta = np.array(cfg.beta, dtype=np.float64)
        visible, _ = _kernels.walk_perturbed(start, beta, n_steps, s)
    else:
        start = np.array(cfg.q0, dtype=np.int64)
        gamma = np.array(cfg.gamma, dtype=np.float64)
        visible, _ = _kernels.walk_twisted(start, gamma, n_steps, s)
    return DensityEstimate(
        visible_count=int(visible),
        total_steps=n_steps,
        seed=seed & rng.MASK64,
        config_digest=cfg.digest,
    )


@dataclass(frozen=True)
class BatchResult:
    """Aggregate of independent seeded runs of one configuration."""

    mean_density: float
    densities: tuple[float, ...]
    std_error: float
    n_steps: int
    base_seed: int
    config_digest: str
    run_seeds: tuple[int, ...] = field(repr=False, default=())

    @property
    def runs(self) -> int:
        return len(self.densities)


def batch_density(
    cfg: WalkConfig,
    n_steps: int,
    runs: int,
    base_seed: int,
    threads: int = 1,
) -> BatchResult:
    """Mean visible density over `runs` independent walks.

    Run i uses seed mix_seed(base_seed, i); the reduction is ordered by run
    index, so the result is identical for any thread count.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    seeds = [rng.mix_seed(base_seed, i) for i in range(runs)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            estimates = list(pool.map(lambda s: simulate(cfg, n_steps, s), seeds))
    else:
        estimates = [simulate(cfg, n_steps, s) for s in seeds]
    densities = tuple(e.density for e in estimates)
    mean = sum(densities) / runs
    if runs > 1:
        var = sum((d - mean) ** 2 for d in densities) / (runs - 1)
        std_error = (var / runs) ** 0.5
    else:
        std_error = 0.0
    return BatchResult(
        mean_density=mean,
        densities=densities,
        std_error=std_error,
        n_steps=n_steps,
        base_seed=base_seed & rng.MASK64,
        config_digest=cfg.digest,
        run_seeds=tuple(seeds),
    )


def sample_final_counts(
    cfg: PerturbedConfig, n: int, samples: int, seed: int
) -> dict[LatticePoint, int]:
    """Histogram of the step-n increment u = p_n - p_0 over Monte Carlo samples.

    Used to compare empirical occupancy against the exact law.
    """
    if n < 1 or samples < 1:
        raise ValueError("n and samples must be >= 1")
    start = np.array(cfg.p0, dtype=np.int64)
    beta = np.array(cfg.beta, dtype=np.float64)
    counts = _kernels.occupancy_counts_perturbed(
        start, beta, n, samples, np.uint64(seed & rng.MASK64)
    )
    k = cfg.k
    out: dict[LatticePoint, int] = {}
    for idx in np.flatnonzero(counts):
        rem = int(idx)
        lead = []
        for _ in range(k - 1):
            lead.append(rem % (n + 1))
            rem //= n + 1
        lead.reverse()
        total = sum(lead)
        if total > n:
            raise AssertionError("sampler produced an out-of-range count vector")
        u = tuple(lead) + (n - total,)
        out[u] = int(counts[idx])
    return out


def trajectory_density(cfg: WalkConfig, n_steps: int, seed: int) -> DensityEstimate:
    """Pure-Python reference walk built from advance(); same stream as simulate().

    Quadratic bookkeeping makes this only suitable for short walks; it exists
    so tests can pin the compiled kernels against the step-level operations.
    """
    _check_capacity(cfg, n_steps)
    state = initial_state(cfg, seed)
    visible = 0
    for _ in range(n_steps):
        state = advance(state, step_probabilities(state, cfg))
        if is_visible(state.position):
            visible += 1
    return DensityEstimate(
        visible_count=visible,
        total_steps=n_steps,
        seed=seed & rng.MASK64,
        config_digest=cfg.digest,
    )
