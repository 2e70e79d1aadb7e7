"""
Semi-streaming driver: k passes over a replayable edge stream, keeping only
per-node state and per-pass accumulation buffers in memory.

Every merge the in-memory builder performs is exact and order independent
(integer counts, integer-valued norm counters, min over keyed draws), so the
streamed result matches `build_embedding` bit for bit whatever the edge order.
"""
from itertools import islice
from typing import Iterator, List, Optional, Tuple

import numpy as np
from structlog import get_logger

from ..errors import DataError
from ..models import CellStatus, SamplerConfig, SamplingMethod
from .graph_core import AttributeTable, EdgeStream
from .hashing import fmix64
from .oracle import EXACT_COUNT_LIMIT
from .sampler import (NO_TOKEN, CoordinateDiagnostics, EmbeddingMatrix, SamplingContext, Walkers,
                      assemble_embedding, build_context, counter_finish, empty_choice,
                      fold_choice, initial_entries, initial_norm_counters, keyed_choice, l0_finish, l0_initial,
                      l0_order, walk_finish)
from .sketches import CounterEntries, compact_entries, concat_entries, estimate_rows, merge_prune_entries

logger = get_logger()

STREAM_CHUNK = 4096
COMPACT_EVERY = 16
# arcs per np.add.at call on the (depth, width) norm counters
COUNTER_CHUNK = 256

_MASK = (1 << 64) - 1
_SECOND = np.uint64(0xD6E8FEB86659FD93)


class EdgeFingerprint:
    """Order-independent digest of one pass's edge multiset"""

    def __init__(self, node_count: int, directed: bool):
        self.node_count = node_count
        self.directed = directed
        self.count = 0
        self.first = 0
        self.second = 0

    def update(self, edges: np.ndarray) -> None:
        u, v = edges[:, 0], edges[:, 1]
        if not self.directed:
            u, v = np.minimum(u, v), np.maximum(u, v)
        keys = u.astype(np.uint64) * np.uint64(self.node_count) + v.astype(np.uint64)
        self.count += len(edges)
        self.first = (self.first + int(fmix64(keys).sum(dtype=np.uint64))) & _MASK
        self.second = (self.second + int(fmix64(keys ^ _SECOND).sum(dtype=np.uint64))) & _MASK

    def matches(self, other: "EdgeFingerprint") -> bool:
        return (self.count, self.first, self.second) == (other.count, other.first, other.second)


def _edge_chunks(stream: EdgeStream, pass_index: int, chunk_size: int) -> Iterator[np.ndarray]:
    edges = stream.edges(pass_index)
    while True:
        block = list(islice(edges, chunk_size))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(-1, 2)


def _arcs(edges: np.ndarray, directed: bool) -> Tuple[np.ndarray, np.ndarray]:
    """(src, dst) where src gathers from dst; undirected edges feed both ends"""
    if directed:
        return edges[:, 0], edges[:, 1]
    return np.concatenate([edges[:, 0], edges[:, 1]]), np.concatenate([edges[:, 1], edges[:, 0]])


class _L0Rounds:
    def __init__(self, ctx: SamplingContext, coords: np.ndarray):
        self.ctx = ctx
        self.order, positions = l0_order(ctx, coords)
        self.state = l0_initial(ctx, positions)

    def begin_pass(self) -> None:
        self.next_state = self.state.copy()

    def absorb(self, src: np.ndarray, dst: np.ndarray) -> None:
        np.minimum.at(self.next_state, src, self.state[dst])

    def end_pass(self) -> None:
        self.state = self.next_state

    def finish(self):
        return l0_finish(self.ctx, self.state, self.order)

    def thresholds(self) -> np.ndarray:
        return np.full(self.ctx.node_count, np.nan)


class _CounterRounds:
    """L1/L2 summaries plus the norm state their thresholds come from"""

    def __init__(self, ctx: SamplingContext, coords: np.ndarray):
        self.ctx = ctx
        self.summaries = initial_entries(ctx, coords)
        self.l1 = ctx.initial_sizes().astype(np.float64)
        self.counters = initial_norm_counters(ctx) if ctx.config.method == SamplingMethod.L2 else None

    def begin_pass(self) -> None:
        self.buffers: List[List[CounterEntries]] = [[] for _ in range(self.ctx.node_count)]
        self.next_l1 = self.l1.copy()
        self.next_counters = None if self.counters is None else self.counters.copy()

    def absorb(self, src: np.ndarray, dst: np.ndarray) -> None:
        for u, v in zip(src.tolist(), dst.tolist()):
            buffer = self.buffers[u]
            buffer.append(self.summaries[v])
            if len(buffer) >= COMPACT_EVERY:
                self.buffers[u] = [compact_entries(concat_entries(buffer))]
        np.add.at(self.next_l1, src, self.l1[dst])
        if self.counters is not None:
            for start in range(0, src.size, COUNTER_CHUNK):
                part = slice(start, start + COUNTER_CHUNK)
                np.add.at(self.next_counters, src[part], self.counters[dst[part]])

    def end_pass(self) -> None:
        capacity = self.ctx.capacity
        self.summaries = [merge_prune_entries(concat_entries([own] + buffer), capacity) if buffer else own
                          for own, buffer in zip(self.summaries, self.buffers)]
        self.buffers = []
        self.l1 = self.next_l1
        self.counters = self.next_counters
        peak = float(self.l1.max(initial=0.0))
        if peak > EXACT_COUNT_LIMIT:
            raise DataError(f"k={self.ctx.config.depth} overflows exact walk counts "
                            f"(peak L1 norm {peak:.3g} > 2^53)")

    def finish(self):
        return counter_finish(self.ctx, self.summaries, self.thresholds())

    def thresholds(self) -> np.ndarray:
        if self.counters is None:
            return self.l1
        return estimate_rows(self.counters)


class _WalkRounds:
    def __init__(self, ctx: SamplingContext, coords: np.ndarray):
        self.ctx = ctx
        self.rows = coords.size
        self.walkers = Walkers.of(ctx.node_count, coords)
        self.positions = self.walkers.starts.copy()
        self.step = 0

    def begin_pass(self) -> None:
        self.step += 1
        self.keys = self.walkers.keys(self.ctx, self.step)
        self.best = empty_choice(self.positions.size)

    def absorb(self, src: np.ndarray, dst: np.ndarray) -> None:
        order = np.argsort(src, kind="stable")
        src, dst = src[order], dst[order]
        ptr = np.searchsorted(src, np.arange(self.ctx.node_count + 1))
        offer = keyed_choice(self.ctx.config.seed, self.walkers.coords, self.keys, self.positions, ptr, dst,
                             self.ctx.node_keys, self.ctx.node_ranks)
        self.best = fold_choice(self.best, offer)

    def end_pass(self) -> None:
        chosen = self.best[2]
        self.positions = np.where(chosen >= 0, chosen, self.positions)

    def finish(self):
        return walk_finish(self.ctx, self.walkers, self.positions, self.rows)

    def thresholds(self) -> np.ndarray:
        return np.full(self.ctx.node_count, np.nan)


class _EmptyRounds:
    """Attribute mode over an empty attribute universe: every cell is empty"""

    def __init__(self, ctx: SamplingContext, coords: np.ndarray):
        self.ctx = ctx
        self.shape = (ctx.node_count, coords.size)

    def begin_pass(self) -> None:
        pass

    def absorb(self, src: np.ndarray, dst: np.ndarray) -> None:
        pass

    def end_pass(self) -> None:
        pass

    def finish(self):
        return (np.full(self.shape, NO_TOKEN, dtype=np.int64),
                np.full(self.shape, CellStatus.EMPTY.value, dtype=np.int8))

    def thresholds(self) -> np.ndarray:
        if self.ctx.config.method.uses_sketch:
            return np.zeros(self.ctx.node_count)
        return np.full(self.ctx.node_count, np.nan)


def _rounds_for(ctx: SamplingContext, coords: np.ndarray):
    if ctx.universe_size == 0:
        return _EmptyRounds(ctx, coords)
    method = ctx.config.method
    if method == SamplingMethod.L0:
        return _L0Rounds(ctx, coords)
    if method == SamplingMethod.RW:
        return _WalkRounds(ctx, coords)
    return _CounterRounds(ctx, coords)


def streaming_pass_driver(stream: EdgeStream, cfg: SamplerConfig, attrs: Optional[AttributeTable] = None,
                          chunk_size: int = STREAM_CHUNK) -> Tuple[EmbeddingMatrix, CoordinateDiagnostics]:
    """Build the embedding in k passes over `stream`; k = 0 reads no edges.

    All d coordinates advance together so the stream is read exactly k times.
    A pass whose edge multiset differs from the first pass's raises DataError.
    """
    ctx = build_context(stream.node_tokens, cfg, attrs if cfg.attribute_mode else None)
    coords = np.arange(cfg.dimensions, dtype=np.uint64)
    rounds = _rounds_for(ctx, coords)
    logger.info("Streaming build started", method=cfg.method.value, k=cfg.depth, d=cfg.dimensions,
                nodes=ctx.node_count)

    reference: Optional[EdgeFingerprint] = None
    for pass_index in range(cfg.depth):
        fingerprint = EdgeFingerprint(ctx.node_count, stream.directed)
        rounds.begin_pass()
        for edges in _edge_chunks(stream, pass_index, chunk_size):
            fingerprint.update(edges)
            rounds.absorb(*_arcs(edges, stream.directed))
        if reference is None:
            reference = fingerprint
        elif not fingerprint.matches(reference):
            raise DataError(f"pass {pass_index + 1} saw a different edge multiset than pass 1 "
                            f"({fingerprint.count} vs {reference.count} edges)")
        rounds.end_pass()
        logger.info("Streaming pass finished", pass_index=pass_index + 1, edges=fingerprint.count)

    emb, diagnostics = assemble_embedding(ctx, [rounds.finish()], rounds.thresholds())
    logger.info("Streaming build finished", method=cfg.method.value, **diagnostics.totals())
    return emb, diagnostics
