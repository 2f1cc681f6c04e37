"""Random-profile sampling and empirical existence-frequency estimation.

Profiles follow the independent-approval model: every voter approves every
candidate with probability p, all n*m events independent.  Bits come from a
counter-based generator (Philox) keyed per trial, so a run is reproducible
bit for bit on any platform and for any worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import ApprovalProfile, BallotHistogram, ElectionSpec
from .kernels import AjrScanner

CSV_HEADER = "k,m,n,p,trials,exists_count,frequency,ci_low,ci_high,seed"
_MASK64 = (1 << 64) - 1
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SampleConfig:
    """One estimation run: election sizes, approval probability, trial count,
    and the master seed all trial streams derive from."""

    spec: ElectionSpec
    p: float
    trials: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"need 0 <= p <= 1, got p={self.p}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class EstimateResult:
    exists_count: int
    trials: int
    frequency: float
    ci_low: float
    ci_high: float
    elapsed: float


@dataclass(frozen=True)
class SweepRecord:
    config: SampleConfig
    estimate: EstimateResult


def mix64(seed: int, index: int) -> int:
    """Derive an independent 64-bit stream key from (seed, index): golden-ratio
    increment followed by the splitmix64 finalizer."""
    z = (seed + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _sample_ballots(spec: ElectionSpec, p: float, seed: int) -> np.ndarray:
    """n ballot masks; draw i*m+j of the keyed Philox stream decides voter i's
    approval of candidate j."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    bits = rng.random((spec.n, spec.m)) < p
    weights = (1 << np.arange(spec.m, dtype=np.int64))
    return bits.astype(np.int64) @ weights


def sample_profile(spec: ElectionSpec, p: float, seed: int) -> ApprovalProfile:
    """One profile from the independent-approval model."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"need 0 <= p <= 1, got p={p}")
    return ApprovalProfile(spec, tuple(int(b) for b in _sample_ballots(spec, p, seed)))


def sample_histogram(spec: ElectionSpec, p: float, seed: int) -> BallotHistogram:
    """Histogram of :func:`sample_profile` without materializing ballots."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"need 0 <= p <= 1, got p={p}")
    counts = np.bincount(_sample_ballots(spec, p, seed), minlength=1 << spec.m)
    return BallotHistogram(spec, counts.astype(np.int64))


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 95%)."""
    if trials < 1:
        raise ValueError("need at least one trial")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * np.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    # Rounding guards: the interval must stay in [0,1] and contain phat
    # (at successes in {0, trials} the exact endpoint equals phat).
    return min(max(0.0, center - half), phat), max(min(1.0, center + half), phat)


def estimate_existence(config: SampleConfig, workers: int = 1) -> EstimateResult:
    """Fraction of sampled profiles admitting a committee that satisfies every
    cohesive group, with a 95% Wilson interval.

    Trial i draws from the stream keyed by mix64(seed, i); results land in a
    per-trial slot, so the outcome is identical for any worker count.
    """
    scanner = AjrScanner(config.spec)
    start = time.perf_counter()
    outcomes = [False] * config.trials

    def run(trial: int) -> None:
        hist = sample_histogram(config.spec, config.p, mix64(config.seed, trial))
        outcomes[trial] = scanner.exists(hist)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(config.trials)))
    else:
        for trial in range(config.trials):
            run(trial)
    exists_count = sum(outcomes)
    low, high = wilson_interval(exists_count, config.trials)
    return EstimateResult(
        exists_count=exists_count,
        trials=config.trials,
        frequency=exists_count / config.trials,
        ci_low=low,
        ci_high=high,
        elapsed=time.perf_counter() - start,
    )


def sweep(
    spec: ElectionSpec,
    p_values,
    trials: int,
    seed: int,
    out=None,
    workers: int = 1,
) -> list[SweepRecord]:
    """One estimate per p, in the given order; optionally stream CSV rows to
    ``out`` (an open text file)."""
    p_values = list(p_values)
    if not p_values:
        raise ValueError("need at least one p value")
    records = []
    if out is not None:
        out.write(CSV_HEADER + "\n")
    for p in p_values:
        config = SampleConfig(spec=spec, p=float(p), trials=trials, seed=seed)
        estimate = estimate_existence(config, workers=workers)
        record = SweepRecord(config, estimate)
        records.append(record)
        if out is not None:
            out.write(record_csv_row(record) + "\n")
    return records


def record_csv_row(record: SweepRecord) -> str:
    spec = record.config.spec
    est = record.estimate
    return (
        f"{spec.k},{spec.m},{spec.n},{record.config.p:.6f},{est.trials},"
        f"{est.exists_count},{est.frequency:.6f},{est.ci_low:.6f},"
        f"{est.ci_high:.6f},{record.config.seed}"
    )


def sweep_csv(records: list[SweepRecord]) -> str:
    """The sweep as a CSV document (header plus one row per p)."""
    return "\n".join([CSV_HEADER] + [record_csv_row(r) for r in records]) + "\n"
