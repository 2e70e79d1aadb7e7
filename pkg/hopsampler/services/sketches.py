"""
Mergeable per-node summaries: min-pair (L0), capped counter summary (L1/L2 heavy
hitters) and CountSketch (L2-norm estimation), plus the batched merge kernels the
sampler runs over whole blocks of coordinates.
"""
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, NamedTuple, Sequence, Union

import numpy as np

from .hashing import RandomKey, draw_bits, token_key, uniform01

_SIGN_SHIFT = np.uint64(63)


@dataclass(frozen=True, order=True)
class MinPairSketch:
    """Smallest (rank, token) seen so far"""
    rank: float
    token: str

    @classmethod
    def of(cls, seed: int, coord: int, token: str) -> "MinPairSketch":
        return cls(uniform01(RandomKey(seed, coord, token)), token)


def minpair_merge(a: MinPairSketch, b: MinPairSketch) -> MinPairSketch:
    return a if (a.rank, a.token) <= (b.rank, b.token) else b


@dataclass(frozen=True)
class TopLCounterSketch:
    """At most `capacity` (token, weight) pairs with strictly positive weights"""
    capacity: int
    entries: Dict[Hashable, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be at least 1")
        if len(self.entries) > self.capacity:
            raise ValueError("more entries than capacity")
        if any(w <= 0 for w in self.entries.values()):
            raise ValueError("weights must be strictly positive")

    def heaviest(self):
        """(token, weight) with the largest weight, ties to the smaller token; None if empty"""
        if not self.entries:
            return None
        return min(self.entries.items(), key=lambda item: (-item[1], item[0]))


def counter_merge_prune(sketches: Iterable[TopLCounterSketch], capacity: int) -> TopLCounterSketch:
    """Sum weights per token over all inputs, keep the `capacity` heaviest.

    Summation is exactly rounded so the result does not depend on input order.
    """
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    parts: Dict[Hashable, List[float]] = defaultdict(list)
    for sketch in sketches:
        for token, weight in sketch.entries.items():
            if weight <= 0:
                raise ValueError("weights must be strictly positive")
            parts[token].append(weight)
    totals = {token: math.fsum(ws) for token, ws in parts.items()}
    kept = sorted(totals.items(), key=lambda item: (-item[1], item[0]))[:capacity]
    return TopLCounterSketch(capacity, dict(kept))


class NormCountSketch:
    """Linear CountSketch over 64-bit token keys; estimates the L2 norm"""

    def __init__(self, epsilon: float = 0.1, depth: int = 5, width_factor: float = 6.0, seed: int = 0,
                 width: Union[int, None] = None):
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        self.epsilon = epsilon
        self.depth = depth
        self.width = width if width is not None else sketch_width(epsilon, width_factor)
        self.seed = seed
        self.counters = np.zeros((depth, self.width), dtype=np.float64)

    def empty_like(self) -> "NormCountSketch":
        return NormCountSketch(self.epsilon, self.depth, seed=self.seed, width=self.width)

    def copy(self) -> "NormCountSketch":
        out = self.empty_like()
        out.counters = self.counters.copy()
        return out

    def locate(self, keys: np.ndarray):
        """(buckets, signs), each shaped (depth, len(keys))"""
        keys = np.asarray(keys, dtype=np.uint64)
        rows = np.arange(self.depth, dtype=np.uint64)[:, None]
        buckets = (draw_bits(self.seed, 2 * rows, keys[None, :]) % np.uint64(self.width)).astype(np.intp)
        signs = 1.0 - 2.0 * (draw_bits(self.seed, 2 * rows + 1, keys[None, :]) >> _SIGN_SHIFT).astype(np.float64)
        return buckets, signs

    def add(self, keys: Sequence[int], weights: Sequence[float]) -> "NormCountSketch":
        """In-place update with many (key, weight) pairs"""
        buckets, signs = self.locate(np.asarray(keys, dtype=np.uint64))
        weights = np.asarray(weights, dtype=np.float64)
        for row in range(self.depth):
            np.add.at(self.counters[row], buckets[row], signs[row] * weights)
        return self

    def compatible(self, other: "NormCountSketch") -> bool:
        return (self.seed, self.depth, self.width) == (other.seed, other.depth, other.width)

    def __add__(self, other: "NormCountSketch") -> "NormCountSketch":
        if not self.compatible(other):
            raise ValueError("sketches use different hash seeds or shapes")
        out = self.empty_like()
        out.counters = self.counters + other.counters
        return out


def sketch_width(epsilon: float, width_factor: float = 6.0) -> int:
    """ceil(c / eps^2), computed on the decimal value of eps"""
    eps = Fraction(repr(epsilon))
    return math.ceil(Fraction(width_factor) / (eps * eps))


def _key_of(token: Union[str, int]) -> int:
    return token_key(token) if isinstance(token, str) else int(token)


def countsketch_update(s: NormCountSketch, token: Union[str, int], weight: float) -> NormCountSketch:
    out = s.copy()
    return out.add([_key_of(token)], [weight])


def estimate_rows(counters: np.ndarray) -> np.ndarray:
    """Median over rows of each row's Euclidean norm; counters shaped (..., depth, width)"""
    return np.median(np.sqrt(np.square(counters).sum(axis=-1)), axis=-1)


def estimate_l2(s: NormCountSketch) -> float:
    return float(estimate_rows(s.counters))


class CounterEntries(NamedTuple):
    """Batched counter summaries: one row per coordinate, `tokens == -1` marks free slots.

    Weights are count * base, where base is the token's per-coordinate reweighting
    factor; counts are integers so merges are exact and order independent.
    """
    tokens: np.ndarray
    counts: np.ndarray
    base: np.ndarray

    def weights(self) -> np.ndarray:
        return np.where(self.tokens >= 0, self.counts * self.base, 0.0)


def empty_entries(rows: int, width: int) -> CounterEntries:
    return CounterEntries(np.full((rows, width), -1, dtype=np.int64),
                          np.zeros((rows, width), dtype=np.int64),
                          np.zeros((rows, width), dtype=np.float64))


def concat_entries(parts: Sequence[CounterEntries]) -> CounterEntries:
    return CounterEntries(np.concatenate([p.tokens for p in parts], axis=1),
                          np.concatenate([p.counts for p in parts], axis=1),
                          np.concatenate([p.base for p in parts], axis=1))


def merge_prune_entries(entries: CounterEntries, capacity: int) -> CounterEntries:
    """Row-wise canonical merge: sum counts per token, keep the `capacity` heaviest.

    Output rows are ordered by (weight desc, token asc), so column 0 is the heaviest entry.
    """
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    rows, width = entries.tokens.shape
    if width == 0:
        return empty_entries(rows, capacity)

    order = np.argsort(entries.tokens, axis=1, kind="stable")
    tokens = np.take_along_axis(entries.tokens, order, axis=1)
    counts = np.take_along_axis(entries.counts, order, axis=1)
    base = np.take_along_axis(entries.base, order, axis=1)

    ends = np.ones((rows, width), dtype=bool)
    ends[:, :-1] = tokens[:, 1:] != tokens[:, :-1]
    running = np.cumsum(counts, axis=1)
    # running total at the previous group end; counts are non-negative so max-accumulate works
    carried = np.maximum.accumulate(np.where(ends, running, 0), axis=1)
    before = np.zeros_like(running)
    before[:, 1:] = carried[:, :-1]
    sums = running - before

    valid = ends & (tokens >= 0) & (sums > 0)
    weights = np.where(valid, sums * base, -np.inf)
    keep = np.lexsort((tokens, -weights), axis=-1)[:, :capacity]

    kept_weights = np.take_along_axis(weights, keep, axis=1)
    live = np.isfinite(kept_weights)
    out = CounterEntries(np.where(live, np.take_along_axis(tokens, keep, axis=1), -1),
                         np.where(live, np.take_along_axis(sums, keep, axis=1), 0),
                         np.where(live, np.take_along_axis(base, keep, axis=1), 0.0))
    if out.tokens.shape[1] < capacity:
        pad = empty_entries(rows, capacity - out.tokens.shape[1])
        out = concat_entries([out, pad])
    return out


def compact_entries(entries: CounterEntries) -> CounterEntries:
    """Lossless merge: duplicate tokens summed, free slots trimmed"""
    width = entries.tokens.shape[1]
    if width == 0:
        return entries
    merged = merge_prune_entries(entries, width)
    used = int((merged.tokens >= 0).sum(axis=1).max(initial=0))
    return CounterEntries(merged.tokens[:, :used], merged.counts[:, :used], merged.base[:, :used])
