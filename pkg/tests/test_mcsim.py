from fractions import Fraction as F

import numpy as np
import pytest

from dimorphic.distributions import pmf, y_spec, z_spec
from dimorphic.errors import DomainError, ImpossibleOutcomeError
from dimorphic.mcsim import (
    BLOCK_SIZE,
    SimConfig,
    block_counts,
    block_generator,
    merge_counts,
    run,
    sample_once,
    split_blocks,
    summarize,
)


def test_y1_is_deterministic():
    spec = y_spec(1)
    rng = block_generator(5, 0)
    assert all(sample_once(spec, rng) == 1 for _ in range(200))
    s = run(SimConfig(spec, 1000, 12345))
    assert s.counts == (0, 1000)
    assert s.tvd_vs_exact == 0
    assert s.empirical_variance == 0


def test_y2_is_roughly_fair():
    s = run(SimConfig(y_spec(2), 200_000, 99))
    assert s.counts[0] == 0
    assert abs(s.counts[1] / 200_000 - 0.5) < 0.01


def test_z1_frequency():
    s = run(SimConfig(z_spec(1, 1, F(1, 2)), 200_000, 4))
    assert abs(s.counts[1] / 200_000 - 2 / 3) < 0.01


def test_sample_once_in_support():
    spec = z_spec(6, F(2, 3), F(1, 4))
    rng = block_generator(0, 0)
    outs = {sample_once(spec, rng) for _ in range(300)}
    assert outs <= set(range(7))


def test_same_config_same_summary():
    config = SimConfig(z_spec(7, F(3, 2), F(1, 3)), 150_000, 2024)
    assert run(config).to_json() == run(config).to_json()
    other = SimConfig(config.spec, config.samples, 2025)
    assert run(other).counts != run(config).counts


def test_counts_sum_to_samples_across_partial_block():
    samples = 2 * BLOCK_SIZE + 17
    s = run(SimConfig(y_spec(5), samples, 1))
    assert sum(s.counts) == samples
    assert s.counts[0] == 0
    assert 0 <= s.tvd_vs_exact <= 1


@pytest.mark.parametrize("parts", [1, 2, 3, 7])
def test_block_split_merge_equals_sequential(parts):
    config = SimConfig(z_spec(5, 1, F(1, 2)), 5 * BLOCK_SIZE + 3, 77)
    sequential = block_counts(config, range(config.num_blocks))
    chunks = split_blocks(config.num_blocks, parts)
    assert [b for c in chunks for b in c] == list(range(config.num_blocks))
    merged = merge_counts(block_counts(config, c) for c in reversed(chunks))
    assert np.array_equal(merged, sequential)


def test_worker_processes_match_sequential():
    config = SimConfig(y_spec(6), 3 * BLOCK_SIZE, 8)
    assert run(config, workers=2) == run(config)


def test_summary_statistics_by_hand():
    spec = y_spec(2)
    s = summarize(spec, [0, 3, 1])
    assert s.empirical_mean == pytest.approx(1.25)
    assert s.empirical_variance == pytest.approx(0.1875)
    assert s.tvd_vs_exact == pytest.approx(0.25)
    # expected counts 2 and 2
    assert s.chi_square_stat == pytest.approx(1.0)


def test_impossible_outcome_is_rejected():
    with pytest.raises(ImpossibleOutcomeError):
        summarize(y_spec(3), [1, 0, 0, 0])


def test_config_validation():
    with pytest.raises(DomainError):
        SimConfig(y_spec(2), 0, 1)
    with pytest.raises(DomainError):
        SimConfig(y_spec(2), 10, -1)
    with pytest.raises(DomainError):
        SimConfig(y_spec(2), 10, 1 << 64)
    # a negative lambda pushes success probabilities above one
    with pytest.raises(DomainError):
        run(SimConfig(z_spec(2, 1, F(-1, 3), relaxed=True), 10, 1))


def test_tvd_shrinks_with_samples():
    spec = z_spec(8, 1, F(1, 2))
    small = run(SimConfig(spec, 2_000, 3)).tvd_vs_exact
    large = run(SimConfig(spec, 400_000, 3)).tvd_vs_exact
    assert large < small
    assert large < 0.01
    assert sum(pmf(spec)) == 1
