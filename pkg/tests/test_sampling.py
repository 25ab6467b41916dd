""" 按排名接近程度采样样本对 """

import numpy as np
import pytest

from ranker.sampling import AllTied, NotEnoughItems, SamplerConfig, default_sampler_config, sample_pairs


def test_two_items_single_pair(make_ranked):
    data = make_ranked([2.0, 1.0])
    assert sample_pairs(data, SamplerConfig(sigma=1.0, max_pairs=10)) == [(0, 1)]


def test_gaps_concentrate_near_each_other(make_ranked):
    data = make_ranked(list(range(1000)))
    pairs = sample_pairs(data, SamplerConfig(sigma=5.0, max_pairs=2000, seed=3))
    gaps = np.array([j - i for i, j in pairs])
    assert len(pairs) == 2000
    assert np.mean(gaps <= 10) >= 0.8


@pytest.mark.parametrize("seed", [1, 2, 7])
def test_same_seed_same_pairs(seed, make_ranked):
    data = make_ranked(list(range(50)))
    cfg = default_sampler_config(len(data), seed=seed)
    assert sample_pairs(data, cfg) == sample_pairs(data, cfg)


def test_pairs_are_unique_and_never_tied(make_ranked):
    targets = [5, 5, 4, 4, 3, 2, 2, 1, 0, 0] * 3
    data = make_ranked(list(range(30)), targets)
    cfg = SamplerConfig(sigma=3.0, max_pairs=60, seed=4)
    pairs = sample_pairs(data, cfg)
    assert 0 < len(pairs) <= 60
    assert len(set(pairs)) == len(pairs)
    for i, j in pairs:
        assert i < j
        assert data.items[i].target > data.items[j].target


def test_window_mode_takes_all_pairs_of_a_block(make_ranked):
    data = make_ranked(list(range(10)))
    pairs = sample_pairs(data, SamplerConfig(sigma=1.0, max_pairs=100, seed=2, window=4))
    start = pairs[0][0]
    assert pairs == [(i, j) for i in range(start, start + 4) for j in range(i + 1, start + 4)]


def test_not_enough_items(make_ranked):
    with pytest.raises(NotEnoughItems):
        sample_pairs(make_ranked([1.0]), SamplerConfig(sigma=1.0, max_pairs=1))


def test_all_tied(make_ranked):
    with pytest.raises(AllTied):
        sample_pairs(make_ranked([1.0, 2.0, 3.0], [0, 0, 0]), SamplerConfig(sigma=1.0, max_pairs=5))


@pytest.mark.parametrize("kwargs", [{'sigma': 0.0, 'max_pairs': 1}, {'sigma': 1.0, 'max_pairs': 0},
                                    {'sigma': 1.0, 'max_pairs': 1, 'window': 1}])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        SamplerConfig(**kwargs)


def test_default_config():
    cfg = default_sampler_config(100)
    assert cfg.sigma == 25.0
    assert cfg.max_pairs == 4950
    assert default_sampler_config(10).sigma == 2.5
    assert default_sampler_config(3).sigma == 1.0
    assert default_sampler_config(1000).max_pairs == 5000


def test_full_window_skips_ties(make_ranked):
    data = make_ranked([0.0, 1.0, 2.0, 3.0], [3, 3, 2, 1])
    pairs = sample_pairs(data, SamplerConfig(sigma=1.0, max_pairs=100, window=4))
    assert pairs == [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_window_subsample_is_seeded(make_ranked):
    data = make_ranked(list(range(30)))
    cfg = SamplerConfig(sigma=1.0, max_pairs=50, seed=6, window=30)
    pairs = sample_pairs(data, cfg)
    assert len(pairs) == 50
    assert pairs == sorted(set(pairs))
    assert pairs == sample_pairs(data, cfg)
    assert all(i < j for i, j in pairs)
