"""
Hamming kernel and its explicit binary feature map
"""
import numpy as np
import pytest

from hopsampler.models import SamplerConfig, SamplingMethod
from hopsampler.services.featuremap import (NULL_TOKEN, DiscreteVector, SparseBinaryMap, explicit_map,
                                            explicit_map_rows, export_sparse, feature_dimension, hamming_kernel,
                                            map_inner_product)
from hopsampler.services.hashing import TabulationHasher
from hopsampler.services.sampler import build_embedding


def vec(*tokens, universe=10):
    return DiscreteVector(tuple(tokens), universe)


def random_pairs(count, d, universe, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield (DiscreteVector(tuple(rng.integers(0, universe, d).tolist()), universe),
               DiscreteVector(tuple(rng.integers(0, universe, d).tolist()), universe))


def test_hamming_kernel():
    assert hamming_kernel(vec(1, 2, 3), vec(1, 2, 3)) == 3
    assert hamming_kernel(vec(1, 2, 3), vec(1, 7, 3)) == 2
    assert hamming_kernel(vec(1, 2), vec(2, 1)) == 0
    assert hamming_kernel(vec(NULL_TOKEN, 4), vec(NULL_TOKEN, 4)) == 1
    with pytest.raises(ValueError):
        hamming_kernel(vec(1, 2), vec(1, 2, 3))


def test_discrete_vector_validates_tokens():
    with pytest.raises(ValueError):
        vec(10)
    assert vec(NULL_TOKEN, 9).dimensions == 2


def test_feature_dimension():
    assert feature_dimension(50, 0.01) == 5000
    assert feature_dimension(50, 1.0) == 50
    assert feature_dimension(3, 0.3) == 10
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            feature_dimension(5, bad)


def test_sparse_map_validation():
    assert len(SparseBinaryMap(10, np.array([1, 4, 9]))) == 3
    with pytest.raises(ValueError):
        SparseBinaryMap(10, np.array([1, 10]))
    with pytest.raises(ValueError):
        SparseBinaryMap(10, np.array([4, 4]))


def test_single_position_maps_to_unit_vector():
    m = explicit_map(vec(7), 0.5, TabulationHasher(0))
    assert m.dimension == 2
    assert map_inner_product(m, m) == 1


def test_map_is_deterministic_and_bounded():
    h = TabulationHasher(3)
    for x, y in random_pairs(200, 50, 100, seed=1):
        a, b = explicit_map(x, 0.01, h), explicit_map(y, 0.01, h)
        assert np.array_equal(a.active, explicit_map(x, 0.01, TabulationHasher(3)).active)
        assert len(a) <= 50
        assert map_inner_product(a, a) == len(a)
        assert map_inner_product(a, b) <= min(len(a), len(b))


def test_distinct_indices_without_collisions_fill_d_slots():
    h = TabulationHasher(5)
    x = vec(*range(8), universe=8)
    m = explicit_map(x, 0.001, h)
    buckets = h.buckets(np.arange(8) * 8 + np.arange(8), m.dimension)
    assert len(m) == len(set(buckets.tolist()))


def test_null_positions_are_dropped():
    m = explicit_map(vec(NULL_TOKEN, NULL_TOKEN, 3), 0.1, TabulationHasher(0))
    assert len(m) == 1


def test_inner_product_dimension_mismatch():
    h = TabulationHasher(0)
    with pytest.raises(ValueError):
        map_inner_product(explicit_map(vec(1, 2), 0.1, h), explicit_map(vec(1, 2, 3), 0.1, h))


def test_error_is_bounded_by_index_collisions():
    h = TabulationHasher(21)
    for x, y in random_pairs(500, 20, 4, seed=2):
        dimension = feature_dimension(20, 0.05)
        xi = np.arange(20) * 4 + np.array(x.tokens)
        yi = np.arange(20) * 4 + np.array(y.tokens)
        bx, by = h.buckets(xi, dimension), h.buckets(yi, dimension)
        collisions = int(((bx[:, None] == by[None, :]) & (xi[:, None] != yi[None, :])).sum())
        collisions += int(sum(bx[i] == bx[j] for i in range(20) for j in range(i + 1, 20)
                              if xi[i] == yi[i] and xi[j] == yi[j]))
        approx = map_inner_product(explicit_map(x, 0.05, h), explicit_map(y, 0.05, h))
        assert abs(approx - hamming_kernel(x, y)) <= collisions


def test_mean_collisions_within_budget():
    """Cross-index collisions per pair average at most eps * d"""
    d, eps, trials = 50, 0.01, 4000
    dimension = feature_dimension(d, eps)
    h = TabulationHasher(8)
    counts = []
    for x, y in random_pairs(trials, d, 1000, seed=3):
        xi = np.arange(d) * 1000 + np.array(x.tokens)
        yi = np.arange(d) * 1000 + np.array(y.tokens)
        bx, by = h.buckets(xi, dimension), h.buckets(yi, dimension)
        counts.append(int(((bx[:, None] == by[None, :]) & (xi[:, None] != yi[None, :])).sum()))
    counts = np.array(counts)
    assert counts.mean() <= eps * d + 3 * counts.std() / np.sqrt(trials)


def test_kernel_approximation_quality():
    h = TabulationHasher(1)
    errors = np.array([abs(map_inner_product(explicit_map(x, 0.01, h), explicit_map(y, 0.01, h))
                           - hamming_kernel(x, y))
                       for x, y in random_pairs(10_000, 50, 5, seed=4)])
    assert errors.mean() <= 0.5
    assert (errors == 0).mean() >= 2 / 3


def test_errors_rarely_exceed_three_budgets():
    eps = 0.02
    h = TabulationHasher(2)
    errors = np.array([abs(map_inner_product(explicit_map(x, eps, h), explicit_map(y, eps, h))
                           - hamming_kernel(x, y))
                       for x, y in random_pairs(5000, 50, 5, seed=5)])
    assert (errors <= 3 * eps * 50).mean() >= 0.99


def test_rows_match_single_vectors(gnp50):
    emb, _ = build_embedding(gnp50, SamplerConfig(method=SamplingMethod.L1, depth=1, dimensions=30, seed=4,
                                                  fallback_policy="empty"))
    h = TabulationHasher(6)
    rows = explicit_map_rows(emb, 0.05, h)
    for u in range(gnp50.node_count):
        single = explicit_map(DiscreteVector.from_embedding(emb, u), 0.05, h)
        assert np.array_equal(rows[u].active, single.active)


def test_export_sparse():
    maps = [SparseBinaryMap(10, np.array([2, 5])), SparseBinaryMap(10, np.array([], dtype=np.int64))]
    assert export_sparse(maps, [1, None]) == "1 2:1 5:1\n0\n"
    assert export_sparse(maps) == "0 2:1 5:1\n0\n"
    assert export_sparse([]) == ""
    with pytest.raises(ValueError):
        export_sparse(maps, [1])
