"""randomness: reproducibility, subset sampling statistics, hit variables."""

import numpy as np

from dynapsp.hop_levels import HopLevels
from dynapsp.rng import HitVarOracle, SeedStream, sample_subset


def test_stream_children_are_independent_and_reproducible():
    a = SeedStream(99).child(1, 2)
    b = SeedStream(99).child(1, 2)
    c = SeedStream(99).child(1, 3)
    xs = a.gen.integers(0, 1 << 30, 10)
    assert np.array_equal(xs, b.gen.integers(0, 1 << 30, 10))
    assert not np.array_equal(xs, c.gen.integers(0, 1 << 30, 10))


def test_sample_subset_edges():
    gen = SeedStream(1).gen
    assert sample_subset(gen, 10, 0.0).size == 0
    assert np.array_equal(sample_subset(gen, 10, 1.0), np.arange(10))
    assert sample_subset(gen, 0, 0.5).size == 0


def test_sample_subset_mean_within_3_sigma():
    gen = SeedStream(7).gen
    n, p, trials = 10_000, 0.5, 40
    sizes = [sample_subset(gen, n, p).size for _ in range(trials)]
    mean = np.mean(sizes)
    sigma = np.sqrt(n * p * (1 - p) / trials)
    assert abs(mean - n * p) <= 3 * sigma


def test_sample_subset_marginals():
    gen = SeedStream(3).gen
    n, p, trials = 40, 0.2, 5000
    counts = np.zeros(n)
    for _ in range(trials):
        counts[sample_subset(gen, n, p)] += 1
    sigma = np.sqrt(p * (1 - p) * trials)
    assert (np.abs(counts - p * trials) <= 4.5 * sigma).all()


def test_hits_type1_full_when_probability_clamps():
    hl = HopLevels(10)
    orc = HitVarOracle(SeedStream(5), 10, hl, kappa=1.0)
    uni = np.arange(10)
    # q = min(1, 100*log2(10)/h_j) = 1 for every level at this size
    for j in hl.levels:
        assert np.array_equal(orc.hits_type1(0, 1, j, uni), uni)


def test_hits_type1_statistics_when_sparse():
    hl = HopLevels(10)
    # force small probabilities with a tiny kappa
    orc = HitVarOracle(SeedStream(5), 10, hl, kappa=0.001)
    uni = np.arange(1000)
    j = hl.i_h
    q = orc.q[j]
    assert q < 1
    trials = 4000
    sizes = [orc.hits_type1(0, 1, j, uni).size for _ in range(trials)]
    mean = np.mean(sizes)
    sigma = np.sqrt(1000 * q * (1 - q) / trials)
    assert abs(mean - 1000 * q) <= 3 * sigma


def test_hits_type2_matches_product_formula():
    hl = HopLevels(10)
    orc = HitVarOracle(SeedStream(9), 10, hl, kappa=0.003)
    uni = np.arange(800)
    j = max(hl.i_h - 2, 0)
    want = 1.0
    for jj in range(j, hl.i_h + 1):
        want *= 1.0 - orc.q[jj]
    want = 1.0 - want
    trials = 4000
    sizes = [orc.hits_type2(0, 1, j, uni).size for _ in range(trials)]
    mean = np.mean(sizes)
    sigma = np.sqrt(800 * want * (1 - want) / trials)
    assert abs(mean - 800 * want) <= 3.5 * sigma
    # last level: type2 equals type1 in distribution
    assert abs(orc.q2[hl.i_h] - orc.q[hl.i_h]) < 1e-12


def test_hits_beyond_top_level_empty():
    hl = HopLevels(10)
    orc = HitVarOracle(SeedStream(5), 10, hl)
    assert orc.hits_type2(0, 1, hl.i_h + 3, np.arange(10)).size == 0


def test_hitting_guarantee_miss_rate():
    # for a fixed set of >= h_j/3 vertices the analytic miss bound holds
    hl = HopLevels(900)  # H = 30ish so some level has q < 1... use kappa
    orc = HitVarOracle(SeedStream(11), 900, hl, kappa=0.01)
    j = hl.i_h
    q = orc.q[j]
    assert q < 1
    uni = np.arange(900)
    target = set(range(0, max(int(hl.h[j]) // 3, 1)))
    bound = (1 - q) ** len(target)
    trials = 3000
    miss = 0
    for _ in range(trials):
        got = orc.hits_type1(0, 1, j, uni)
        if not (set(got.tolist()) & target):
            miss += 1
    assert miss / trials <= bound * 1.5 + 3 * np.sqrt(bound / trials)
