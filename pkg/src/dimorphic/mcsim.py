"""Seeded Monte Carlo sampling of the Bernoulli sums.

Random stream
-------------
Samples are drawn in blocks of :data:`BLOCK_SIZE`.  Block ``b`` of a run with
seed ``s`` uses NumPy's counter-based Philox-4x64 generator keyed with the
128-bit integer ``s + (b << 64)`` and draws a ``(block_len, n)`` array of
doubles with ``Generator.random``.  Sample ``i`` of the block counts the
components ``j`` with ``u[i, j] < p_j``, where ``p_j`` is the exact success
probability rounded once to the nearest double (relative error below
``2**-52``, far under the sampling noise).

Because each block depends only on ``(seed, b)``, any partition of the block
range across workers reproduces the sequential counts exactly once merged.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .distributions import BernoulliSumSpec, pmf
from .errors import DomainError, ImpossibleOutcomeError

BLOCK_SIZE = 1 << 16
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    spec: BernoulliSumSpec
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if not 0 <= self.seed <= SEED_MASK:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def num_blocks(self) -> int:
        return -(-self.samples // BLOCK_SIZE)


@dataclass(frozen=True)
class EmpiricalSummary:
    counts: tuple
    empirical_mean: float
    empirical_variance: float
    tvd_vs_exact: float
    chi_square_stat: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = list(self.counts)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def thresholds(spec: BernoulliSumSpec) -> np.ndarray:
    probs = spec.success_probabilities()
    if any(not 0 <= p <= 1 for p in probs):
        raise DomainError("cannot sample: a success probability lies outside [0, 1]")
    return np.array([float(p) for p in probs], dtype=np.float64)


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed + (block << 64)))


def sample_once(spec: BernoulliSumSpec, rng: np.random.Generator) -> int:
    """One draw of the sum: ``n`` uniforms compared against the thresholds."""
    u = rng.random(spec.n)
    return int(np.count_nonzero(u < thresholds(spec)))


def block_counts(config: SimConfig, blocks) -> np.ndarray:
    """Outcome histogram for the given block indices of ``config``'s stream."""
    spec = config.spec
    p = thresholds(spec)
    counts = np.zeros(spec.n + 1, dtype=np.int64)
    for b in blocks:
        size = min(BLOCK_SIZE, config.samples - b * BLOCK_SIZE)
        if size <= 0:
            continue
        u = block_generator(config.seed, b).random((size, spec.n))
        outcomes = np.count_nonzero(u < p, axis=1)
        counts += np.bincount(outcomes, minlength=spec.n + 1)
    return counts


def merge_counts(parts) -> np.ndarray:
    parts = list(parts)
    total = np.zeros_like(parts[0])
    for c in parts:
        total = total + c
    return total


def _block_job(args):
    config, blocks = args
    return block_counts(config, blocks)


def split_blocks(num_blocks: int, parts: int) -> list:
    """Contiguous, near-equal partition of ``range(num_blocks)``."""
    parts = max(1, min(parts, num_blocks))
    step, extra = divmod(num_blocks, parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out


def summarize(spec: BernoulliSumSpec, counts) -> EmpiricalSummary:
    counts = [int(c) for c in counts]
    total = sum(counts)
    exact = pmf(spec)
    chi2 = 0.0
    for k, c in enumerate(counts):
        p = exact[k]
        if p == 0:
            if c:
                raise ImpossibleOutcomeError(
                    f"outcome {k} has probability 0 but was observed {c} times"
                )
            continue
        expected = total * float(p)
        chi2 += (c - expected) ** 2 / expected
    mean = math.fsum(k * c for k, c in enumerate(counts)) / total
    var = math.fsum(c * (k - mean) ** 2 for k, c in enumerate(counts)) / total
    tvd = 0.5 * math.fsum(abs(c / total - float(exact[k])) for k, c in enumerate(counts))
    return EmpiricalSummary(tuple(counts), mean, var, tvd, chi2)


def run(config: SimConfig, workers: int | None = None) -> EmpiricalSummary:
    """Simulate, then compare the histogram with the exact PMF.

    The result depends only on ``config``; ``workers`` changes speed, never
    the counts.
    """
    blocks = range(config.num_blocks)
    if workers and workers > 1 and config.num_blocks > 1:
        chunks = split_blocks(config.num_blocks, workers)
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            counts = merge_counts(pool.map(_block_job, [(config, c) for c in chunks]))
    else:
        counts = block_counts(config, blocks)
    return summarize(config.spec, counts)
