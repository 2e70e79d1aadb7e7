"""
Keyed uniform draws and tabulation hashing
"""
import numpy as np
import pytest

from hopsampler.services.hashing import (RandomKey, TabulationHasher, bits_to_uniform, bucket_hash, derive_seed,
                                         draw_bits, step_keys, token_key, token_keys, uniform01, uniform_grid)


def test_uniform01_is_deterministic_and_in_range():
    key = RandomKey(7, 3, "node-42")
    value = uniform01(key)
    assert value == uniform01(RandomKey(7, 3, "node-42"))
    assert 0.0 < value <= 1.0


def test_uniform01_varies_with_every_key_part():
    base = uniform01(RandomKey(7, 3, "a"))
    assert uniform01(RandomKey(8, 3, "a")) != base
    assert uniform01(RandomKey(7, 4, "a")) != base
    assert uniform01(RandomKey(7, 3, "b")) != base


def test_bits_to_uniform_endpoints():
    bits = np.array([0, np.iinfo(np.uint64).max], dtype=np.uint64)
    low, high = bits_to_uniform(bits)
    assert low == 2.0 ** -53
    assert high == 1.0


def test_uniform01_matches_grid():
    keys = token_keys(["a", "b", "c"])
    grid = uniform_grid(11, np.arange(4)[:, None], keys[None, :])
    assert grid.shape == (4, 3)
    assert grid[2, 1] == uniform01(RandomKey(11, 2, "b"))


def test_draws_look_uniform():
    """Chi-square over 64 equal bins; 103.4 is the 0.1% critical value at 63 df"""
    draws = uniform_grid(3, np.arange(100_000), token_key("x"))
    counts, _ = np.histogram(draws, bins=64, range=(0.0, 1.0))
    expected = draws.size / 64
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < 103.4
    assert abs(draws.mean() - 0.5) < 0.005


def test_draw_bits_broadcast():
    bits = draw_bits(0, np.arange(5)[:, None], np.arange(3, dtype=np.uint64)[None, :])
    assert bits.shape == (5, 3)
    assert bits.dtype == np.uint64
    assert len(np.unique(bits)) == 15


def test_token_key_is_stable_64_bit():
    assert token_key("alpha") == token_key("alpha")
    assert token_key("alpha") != token_key("beta")
    assert 0 <= token_key("alpha") < 2 ** 64


def test_tabulation_hasher_is_seeded():
    keys = np.arange(1000, dtype=np.uint64)
    assert np.array_equal(TabulationHasher(1).hash(keys), TabulationHasher(1).hash(keys))
    assert not np.array_equal(TabulationHasher(1).hash(keys), TabulationHasher(2).hash(keys))


def test_buckets_in_range_and_spread():
    h = TabulationHasher(9)
    buckets = h.buckets(np.arange(50_000, dtype=np.uint64), 100)
    assert buckets.min() >= 0 and buckets.max() < 100
    counts = np.bincount(buckets, minlength=100)
    assert counts.min() > 350 and counts.max() < 650
    assert bucket_hash(h, 1234, 100) == int(h.buckets(1234, 100)[0])


def test_buckets_reject_zero():
    with pytest.raises(ValueError):
        TabulationHasher(0).buckets([1], 0)


def test_derived_seeds_and_step_keys_differ():
    assert derive_seed(5, "norm") == derive_seed(5, "norm")
    assert derive_seed(5, "norm") != derive_seed(5, "walk")
    assert derive_seed(5, "norm") != derive_seed(6, "norm")
    keys = token_keys(["a", "b"])
    assert not np.array_equal(step_keys(keys, 1), step_keys(keys, 2))
