"""
Mergeable summaries: min pairs, capped counters and the L2-norm CountSketch
"""
import itertools
import math

import numpy as np
import pytest

from hopsampler.services.sketches import (CounterEntries, MinPairSketch, NormCountSketch, TopLCounterSketch,
                                          compact_entries, concat_entries, countsketch_update,
                                          counter_merge_prune, estimate_l2, merge_prune_entries, minpair_merge,
                                          sketch_width)


def test_minpair_merge_keeps_smallest():
    a = MinPairSketch.of(1, 0, "a")
    b = MinPairSketch.of(1, 0, "b")
    merged = minpair_merge(a, b)
    assert merged == min(a, b)
    assert minpair_merge(b, a) == merged
    assert minpair_merge(MinPairSketch(0.5, "y"), MinPairSketch(0.5, "x")).token == "x"


def test_counter_sketch_validation():
    with pytest.raises(ValueError):
        TopLCounterSketch(0)
    with pytest.raises(ValueError):
        TopLCounterSketch(1, {"a": 1.0, "b": 2.0})
    with pytest.raises(ValueError):
        TopLCounterSketch(2, {"a": 0.0})


def test_counter_merge_keeps_heaviest_with_token_ties():
    left = TopLCounterSketch(3, {"a": 1.0, "b": 2.0})
    right = TopLCounterSketch(3, {"b": 1.0, "c": 3.0, "d": 0.5})
    merged = counter_merge_prune([left, right], 2)
    assert merged.entries == {"b": 3.0, "c": 3.0}
    assert merged.heaviest() == ("b", 3.0)
    assert TopLCounterSketch(1).heaviest() is None


def test_counter_merge_is_order_independent():
    rng = np.random.default_rng(4)
    sketches = [TopLCounterSketch(4, {int(t): float(w) for t, w in zip(rng.choice(12, 4, replace=False),
                                                                        rng.random(4) + 0.01)})
                for _ in range(4)]
    results = {tuple(sorted(counter_merge_prune(perm, 4).entries.items()))
               for perm in itertools.permutations(sketches)}
    assert len(results) == 1


def test_counter_merge_underestimate_bound():
    """A single merge never loses more than total/(capacity+1) of any token"""
    rng = np.random.default_rng(11)
    capacity = 5
    for _ in range(10_000):
        inputs = []
        for _ in range(int(rng.integers(2, 6))):
            size = int(rng.integers(1, capacity + 1))
            tokens = rng.choice(30, size, replace=False)
            inputs.append(TopLCounterSketch(capacity, {int(t): float(rng.integers(1, 20)) for t in tokens}))
        exact = {}
        for sketch in inputs:
            for token, weight in sketch.entries.items():
                exact[token] = exact.get(token, 0.0) + weight
        total = sum(exact.values())
        merged = counter_merge_prune(inputs, capacity)
        for token, weight in exact.items():
            assert weight - merged.entries.get(token, 0.0) <= total / (capacity + 1) + 1e-9


def test_sketch_width_uses_decimal_epsilon():
    assert sketch_width(0.1) == 600
    assert sketch_width(0.01) == 60_000
    assert sketch_width(0.5, 2.0) == 8


def test_countsketch_is_linear():
    keys = np.arange(40, dtype=np.uint64)
    first = NormCountSketch(seed=3).add(keys[:25], np.arange(25.0))
    second = NormCountSketch(seed=3).add(keys[15:], np.ones(25))
    both = NormCountSketch(seed=3).add(keys[:25], np.arange(25.0)).add(keys[15:], np.ones(25))
    assert np.array_equal((first + second).counters, both.counters)

    with pytest.raises(ValueError):
        first + NormCountSketch(seed=4)


def test_countsketch_update_returns_copy():
    s = NormCountSketch(seed=1)
    updated = countsketch_update(s, "token", 3.0)
    assert not s.counters.any()
    assert estimate_l2(updated) == pytest.approx(3.0)


def test_countsketch_estimates_within_ten_percent():
    hits = 0
    for trial in range(1000):
        rng = np.random.default_rng(trial)
        size = int(rng.integers(5, 200))
        keys = rng.integers(0, 2 ** 63, size=size, dtype=np.uint64)
        weights = rng.integers(1, 50, size=size).astype(np.float64)
        s = NormCountSketch(epsilon=0.1, seed=trial).add(keys, weights)
        truth = math.sqrt(float((weights ** 2).sum()))
        hits += 0.9 * truth <= estimate_l2(s) <= 1.1 * truth
    assert hits >= 900


def entries(tokens, counts, base):
    return CounterEntries(np.array(tokens, dtype=np.int64), np.array(counts, dtype=np.int64),
                          np.array(base, dtype=np.float64))


def test_merge_prune_entries_sums_counts():
    raw = entries([[3, 1, 3, -1]], [[1, 2, 2, 0]], [[1.0, 1.0, 1.0, 0.0]])
    top = merge_prune_entries(raw, 1)
    assert top.tokens.tolist() == [[3]]
    assert top.counts.tolist() == [[3]]
    wide = merge_prune_entries(raw, 3)
    assert wide.tokens.tolist() == [[3, 1, -1]]
    assert wide.counts.tolist() == [[3, 2, 0]]


def test_merge_prune_entries_breaks_weight_ties_by_token():
    raw = entries([[7, 2, 5]], [[1, 1, 1]], [[2.0, 2.0, 1.0]])
    assert merge_prune_entries(raw, 2).tokens.tolist() == [[2, 7]]


def test_merge_prune_entries_is_order_independent():
    rng = np.random.default_rng(2)
    tokens = rng.integers(-1, 10, size=(6, 20))
    base_by_token = rng.random(10) + 0.1
    counts = np.where(tokens >= 0, rng.integers(1, 5, size=tokens.shape), 0)
    base = np.where(tokens >= 0, base_by_token[np.maximum(tokens, 0)], 0.0)
    reference = merge_prune_entries(entries(tokens, counts, base), 4)
    for _ in range(5):
        perm = rng.permutation(20)
        shuffled = merge_prune_entries(entries(tokens[:, perm], counts[:, perm], base[:, perm]), 4)
        assert np.array_equal(shuffled.tokens, reference.tokens)
        assert np.array_equal(shuffled.counts, reference.counts)


def test_compact_entries_is_lossless():
    raw = entries([[4, 4, -1, 2, 9, 2]], [[1, 1, 0, 3, 1, 1]], [[0.5, 0.5, 0.0, 0.25, 2.0, 0.25]])
    compact = compact_entries(raw)
    assert compact.tokens.shape[1] == 3
    again = concat_entries([compact, raw])
    assert np.array_equal(merge_prune_entries(again, 2).tokens, merge_prune_entries(raw, 2).tokens)
    assert merge_prune_entries(compact, 3).counts.tolist() == merge_prune_entries(raw, 3).counts.tolist()
