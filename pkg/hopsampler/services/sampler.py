"""
Coordinated k-hop neighborhood sampling engine.

Every coordinate runs k bulk-synchronous rounds in which each node merges its own
summary with its neighbors'. Coordinates are processed in blocks: one numpy axis
carries the block's coordinates so a round is a handful of array operations.
Universe items (nodes, or attributes in attribute mode) are handled internally by
canonical rank, the position of their external token in lexicographic order, so
every tie is broken the same way no matter how the input was interned.
"""
import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, TextIO, Tuple

import numpy as np
import pandas as pd
from structlog import get_logger

from ..errors import DataError, UsageError
from ..models import CellStatus, FallbackPolicy, SamplerConfig, SamplingMethod
from .graph_core import AttributeTable, Graph, lexicographic_ranks
from .hashing import bits_to_uniform, derive_seed, draw_bits, step_keys, token_keys
from .oracle import ensure_exact_counts, l1_norms
from .sketches import CounterEntries, NormCountSketch, concat_entries, estimate_rows, merge_prune_entries

logger = get_logger()

EMPTY_TOKEN = "∅"
NO_TOKEN = -1
_MAX_BITS = np.iinfo(np.uint64).max
_NO_RANK = np.iinfo(np.int64).max


@dataclass(frozen=True)
class SamplingContext:
    """Per-build tables shared by every coordinate block"""
    config: SamplerConfig
    node_tokens: Tuple[str, ...]
    universe: Tuple[str, ...]
    capacity: int
    rank_to_id: np.ndarray
    item_keys: np.ndarray  # indexed by canonical rank
    init_ptr: np.ndarray
    init_items: np.ndarray  # canonical ranks, grouped by node
    node_keys: np.ndarray
    node_ranks: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.node_tokens)

    @property
    def universe_size(self) -> int:
        return len(self.universe)

    def initial_sizes(self) -> np.ndarray:
        return np.diff(self.init_ptr)

    def to_universe(self, ranks: np.ndarray) -> np.ndarray:
        out = np.full(ranks.shape, NO_TOKEN, dtype=np.int64)
        present = ranks >= 0
        out[present] = self.rank_to_id[ranks[present]]
        return out


def build_context(node_tokens: Sequence[str], cfg: SamplerConfig,
                  attrs: Optional[AttributeTable] = None) -> SamplingContext:
    if cfg.attribute_mode and attrs is None:
        raise UsageError("attribute mode needs an attribute table")
    node_tokens = tuple(node_tokens)
    node_ranks = lexicographic_ranks(node_tokens)

    if cfg.attribute_mode:
        if len(attrs.node_attributes) != len(node_tokens):
            raise DataError("attribute table does not cover the graph's nodes")
        universe = attrs.attribute_tokens
        ranks = lexicographic_ranks(universe)
        sizes = np.array([len(row) for row in attrs.node_attributes], dtype=np.int64)
        items = np.fromiter((ranks[a] for row in attrs.node_attributes for a in row),
                            dtype=np.int64, count=int(sizes.sum()))
    else:
        universe = node_tokens
        ranks = node_ranks
        sizes = np.ones(len(node_tokens), dtype=np.int64)
        items = node_ranks.copy()

    init_ptr = np.zeros(len(node_tokens) + 1, dtype=np.int64)
    np.cumsum(sizes, out=init_ptr[1:])
    rank_to_id = np.argsort(ranks)

    return SamplingContext(
        config=cfg,
        node_tokens=node_tokens,
        universe=tuple(universe),
        capacity=cfg.resolved_sketch_size(len(node_tokens)) if cfg.method.uses_sketch else 0,
        rank_to_id=rank_to_id,
        item_keys=token_keys(universe)[rank_to_id],
        init_ptr=init_ptr,
        init_items=items,
        node_keys=token_keys(node_tokens),
        node_ranks=node_ranks,
    )


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """n x d sample tokens (universe ids, -1 for empty cells) with per-cell status"""
    node_tokens: Tuple[str, ...]
    universe: Tuple[str, ...]
    tokens: np.ndarray
    status: np.ndarray
    header: Dict[str, object] = field(default_factory=dict)
    config: Optional[SamplerConfig] = None

    def __post_init__(self):
        if self.tokens.shape != self.status.shape or self.tokens.shape[0] != len(self.node_tokens):
            raise ValueError("token and status grids must be n x d")
        self.tokens.setflags(write=False)
        self.status.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.tokens.shape[0]

    @property
    def dimensions(self) -> int:
        return self.tokens.shape[1]

    def cell(self, node: int, coordinate: int) -> Optional[str]:
        token = int(self.tokens[node, coordinate])
        return None if token < 0 else self.universe[token]

    def row_tokens(self, node: int) -> List[Optional[str]]:
        return [self.cell(node, j) for j in range(self.dimensions)]

    def node_index(self, token: str) -> int:
        try:
            return self.node_tokens.index(token)
        except ValueError:
            raise DataError(f"unknown node {token}") from None

    def cell_strings(self) -> np.ndarray:
        lookup = np.array(self.universe + (EMPTY_TOKEN,), dtype=object)
        return lookup[self.tokens]

    def to_text(self) -> str:
        lines = ["# " + "\t".join(f"{key}={value}" for key, value in self.header.items())]
        for node, row in zip(self.node_tokens, self.cell_strings()):
            lines.append("\t".join((node, *row)))
        return "\n".join(lines) + "\n"

    def to_tsv(self, handle: TextIO) -> None:
        handle.write(self.to_text())

    @classmethod
    def from_tsv(cls, handle: TextIO) -> "EmbeddingMatrix":
        """Read an embedding written by `to_tsv`.

        Cell statuses come back as sampled or empty; fallback flags live in the
        diagnostics sidecar only.
        """
        first = handle.readline()
        if not first.startswith("#"):
            raise DataError("embedding file lacks its header line")
        header = dict(item.split("=", 1) for item in first[1:].strip().split("\t") if "=" in item)
        try:
            frame = pd.read_csv(handle, sep="\t", header=None, dtype=str, quoting=csv.QUOTE_NONE,
                                keep_default_na=False, na_filter=False)
        except pd.errors.EmptyDataError:
            raise DataError("embedding file has no rows") from None

        node_tokens = tuple(frame.iloc[:, 0])
        cells = frame.iloc[:, 1:].to_numpy(dtype=object)
        if "d" in header and cells.shape[1] != int(header["d"]):
            raise DataError(f"expected {header['d']} sample columns, found {cells.shape[1]}")

        if header.get("attributes") == "true":
            universe = tuple(sorted(set(cells.ravel()) - {EMPTY_TOKEN}))
        else:
            universe = node_tokens
        index = {token: i for i, token in enumerate(universe)}
        index[EMPTY_TOKEN] = NO_TOKEN
        try:
            tokens = np.array([[index[cell] for cell in row] for row in cells], dtype=np.int64)
        except KeyError as e:
            raise DataError(f"sample token {e.args[0]} is not a node") from None
        tokens = tokens.reshape(cells.shape)
        status = np.where(tokens >= 0, CellStatus.SAMPLED.value, CellStatus.EMPTY.value).astype(np.int8)
        return cls(node_tokens, universe, tokens, status, header)


@dataclass(frozen=True, eq=False)
class CoordinateDiagnostics:
    """Per-coordinate status counts and the per-node thresholds they were judged against"""
    sampled: np.ndarray
    fallback: np.ndarray
    empty: np.ndarray
    thresholds: np.ndarray

    @classmethod
    def from_status(cls, status: np.ndarray, thresholds: np.ndarray) -> "CoordinateDiagnostics":
        return cls(
            sampled=(status == CellStatus.SAMPLED.value).sum(axis=0),
            fallback=(status == CellStatus.FALLBACK.value).sum(axis=0),
            empty=(status == CellStatus.EMPTY.value).sum(axis=0),
            thresholds=np.asarray(thresholds, dtype=np.float64),
        )

    def totals(self) -> Dict[str, int]:
        return {"sampled": int(self.sampled.sum()), "fallback": int(self.fallback.sum()),
                "empty": int(self.empty.sum())}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"coordinate": np.arange(self.sampled.size), "sampled": self.sampled,
                             "fallback": self.fallback, "empty": self.empty})

    def thresholds_frame(self, node_tokens: Sequence[str]) -> pd.DataFrame:
        return pd.DataFrame({"node": list(node_tokens), "threshold": self.thresholds})


class CoordinateSample(NamedTuple):
    """One coordinate's column: universe ids (-1 when empty) and statuses"""
    tokens: np.ndarray
    status: np.ndarray


# -- thresholds ---------------------------------------------------------------

def norm_sketch_template(cfg: SamplerConfig) -> NormCountSketch:
    return NormCountSketch(cfg.norm_epsilon, cfg.norm_sketch_depth, cfg.norm_sketch_width_factor,
                           seed=derive_seed(cfg.seed, "norm"))


def initial_norm_counters(ctx: SamplingContext) -> np.ndarray:
    """CountSketch counters of every node's initial items, shaped (n, depth, width)"""
    template = norm_sketch_template(ctx.config)
    counters = np.zeros((ctx.node_count, template.depth, template.width), dtype=np.float64)
    if ctx.init_items.size == 0:
        return counters
    buckets, signs = template.locate(ctx.item_keys[ctx.init_items])
    owners = np.repeat(np.arange(ctx.node_count), ctx.initial_sizes())
    for row in range(template.depth):
        np.add.at(counters[:, row, :], (owners, buckets[row]), signs[row])
    return counters


def _propagate_counters(g: Graph, counters: np.ndarray, k: int) -> np.ndarray:
    # counters hold integers below 2^53, so the sums are exact in any order
    busy = np.flatnonzero(g.degrees())
    for _ in range(k):
        nxt = counters.copy()
        for u in busy:
            nxt[u] += counters[g.indices[g.indptr[u]:g.indptr[u + 1]]].sum(axis=0)
        counters = nxt
    return counters


def _thresholds(g: Graph, ctx: SamplingContext) -> np.ndarray:
    cfg = ctx.config
    if cfg.method == SamplingMethod.L1:
        return l1_norms(g, cfg.depth, ctx.initial_sizes(), dtype=np.int64).astype(np.float64)
    if cfg.method == SamplingMethod.L2:
        return estimate_rows(_propagate_counters(g, initial_norm_counters(ctx), cfg.depth))
    return np.full(ctx.node_count, np.nan)


def node_thresholds(g: Graph, cfg: SamplerConfig, attrs: Optional[AttributeTable] = None) -> np.ndarray:
    """Per-node acceptance threshold: exact L1 norm, estimated L2 norm, NaN for l0/rw"""
    ctx = build_context(g.tokens, cfg, attrs if cfg.attribute_mode else None)
    if cfg.method.uses_sketch:
        ensure_exact_counts(g, cfg.depth, ctx.initial_sizes())
    return _thresholds(g, ctx)


# -- L0 -------------------------------------------------------------------------

def l0_order(ctx: SamplingContext, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(order, positions), each (B, N): ranks sorted by (draw, rank) and each rank's place in that order"""
    size = ctx.universe_size
    bits = draw_bits(ctx.config.seed, coords[:, None], ctx.item_keys[None, :])
    ranks = np.broadcast_to(np.arange(size, dtype=np.int64), bits.shape)
    order = np.lexsort((ranks, bits), axis=-1)
    positions = np.empty_like(order)
    np.put_along_axis(positions, order, ranks, axis=-1)
    return order, positions


def l0_initial(ctx: SamplingContext, positions: np.ndarray) -> np.ndarray:
    """Per-node best position, shaped (n, B); N marks an empty node"""
    state = np.full((ctx.node_count, positions.shape[0]), ctx.universe_size, dtype=np.int64)
    sizes = ctx.initial_sizes()
    owners = np.flatnonzero(sizes)
    if owners.size:
        mins = np.minimum.reduceat(positions[:, ctx.init_items], ctx.init_ptr[owners], axis=1)
        state[owners] = mins.T
    return state


def _l0_round(g: Graph, state: np.ndarray) -> np.ndarray:
    busy = g.degrees() > 0
    if not busy.any():
        return state
    gathered = np.minimum.reduceat(state[g.indices], g.indptr[:-1][busy], axis=0)
    nxt = state.copy()
    nxt[busy] = np.minimum(state[busy], gathered)
    return nxt


def l0_finish(ctx: SamplingContext, state: np.ndarray, order: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    empty = state >= ctx.universe_size
    ranks = np.take_along_axis(order, np.where(empty, 0, state).T, axis=1).T
    tokens = ctx.to_universe(np.where(empty, NO_TOKEN, ranks))
    status = np.where(empty, CellStatus.EMPTY.value, CellStatus.SAMPLED.value).astype(np.int8)
    return tokens, status


def _l0_block(g: Graph, ctx: SamplingContext, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    order, positions = l0_order(ctx, coords)
    state = l0_initial(ctx, positions)
    for _ in range(ctx.config.depth):
        state = _l0_round(g, state)
    return l0_finish(ctx, state, order)


# -- L1 / L2 -----------------------------------------------------------------

def initial_entries(ctx: SamplingContext, coords: np.ndarray) -> List[CounterEntries]:
    """One pruned summary per node: each initial item with count 1 and weight 1/r (L1) or 1/sqrt(r) (L2)"""
    cfg = ctx.config
    r = bits_to_uniform(draw_bits(cfg.seed, coords[:, None], ctx.item_keys[ctx.init_items][None, :]))
    base = 1.0 / r if cfg.method == SamplingMethod.L1 else 1.0 / np.sqrt(r)
    rows = coords.size
    out = []
    for u in range(ctx.node_count):
        lo, hi = ctx.init_ptr[u], ctx.init_ptr[u + 1]
        entries = CounterEntries(np.broadcast_to(ctx.init_items[lo:hi], (rows, hi - lo)).copy(),
                                 np.ones((rows, hi - lo), dtype=np.int64),
                                 base[:, lo:hi])
        out.append(merge_prune_entries(entries, ctx.capacity))
    return out


def select_heavy(entries: CounterEntries, thresholds, policy: FallbackPolicy) -> Tuple[np.ndarray, np.ndarray]:
    """Heaviest entry per row; sampled when its weight reaches the threshold, else per policy"""
    token = entries.tokens[:, 0]
    weight = entries.counts[:, 0] * entries.base[:, 0]
    present = token >= 0
    sampled = present & (weight >= thresholds)
    if FallbackPolicy(policy) == FallbackPolicy.EMPTY:
        token = np.where(sampled, token, NO_TOKEN)
        status = np.where(sampled, CellStatus.SAMPLED.value, CellStatus.EMPTY.value)
    else:
        status = np.where(sampled, CellStatus.SAMPLED.value,
                          np.where(present, CellStatus.FALLBACK.value, CellStatus.EMPTY.value))
    return token, status.astype(np.int8)


def counter_finish(ctx: SamplingContext, summaries: Sequence[CounterEntries],
                   thresholds: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    rows = summaries[0].tokens.shape[0] if summaries else 0
    tokens = np.full((ctx.node_count, rows), NO_TOKEN, dtype=np.int64)
    status = np.full((ctx.node_count, rows), CellStatus.EMPTY.value, dtype=np.int8)
    for u, entries in enumerate(summaries):
        ranks, status[u] = select_heavy(entries, thresholds[u], ctx.config.fallback_policy)
        tokens[u] = ctx.to_universe(ranks)
    return tokens, status


def _counter_round(g: Graph, ctx: SamplingContext, current: List[CounterEntries]) -> List[CounterEntries]:
    nxt = []
    for u in range(ctx.node_count):
        nbrs = g.indices[g.indptr[u]:g.indptr[u + 1]]
        if nbrs.size == 0:
            nxt.append(current[u])
            continue
        merged = concat_entries([current[u]] + [current[v] for v in nbrs])
        nxt.append(merge_prune_entries(merged, ctx.capacity))
    return nxt


def _counter_block(g: Graph, ctx: SamplingContext, coords: np.ndarray,
                   thresholds: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    summaries = initial_entries(ctx, coords)
    for _ in range(ctx.config.depth):
        summaries = _counter_round(g, ctx, summaries)
    return counter_finish(ctx, summaries, thresholds)


# -- random walks --------------------------------------------------------------

def empty_choice(size: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (np.full(size, _MAX_BITS, dtype=np.uint64), np.full(size, _NO_RANK, dtype=np.int64),
            np.full(size, NO_TOKEN, dtype=np.int64))


def keyed_choice(seed: int, coords: np.ndarray, walker_keys: np.ndarray, owners: np.ndarray,
                 ptr: np.ndarray, items: np.ndarray, item_keys: np.ndarray,
                 item_ranks: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every walker, the item of its owner's group with the smallest (draw, rank).

    Returns (bits, ranks, items) per walker; walkers whose group is empty get
    (max, max, -1), which never beats a real candidate.
    """
    counts = ptr[owners + 1] - ptr[owners]
    total = int(counts.sum())
    best_bits, best_ranks, best_items = empty_choice(owners.size)
    if total == 0:
        return best_bits, best_ranks, best_items

    walker = np.repeat(np.arange(owners.size), counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    candidates = items[ptr[owners][walker] + offsets]
    bits = draw_bits(seed, coords[walker], walker_keys[walker] ^ item_keys[candidates])
    ranks = item_ranks[candidates]

    order = np.lexsort((ranks, bits, walker))
    walker, bits, ranks, candidates = walker[order], bits[order], ranks[order], candidates[order]
    first = np.ones(total, dtype=bool)
    first[1:] = walker[1:] != walker[:-1]
    chosen = walker[first]
    best_bits[chosen] = bits[first]
    best_ranks[chosen] = ranks[first]
    best_items[chosen] = candidates[first]
    return best_bits, best_ranks, best_items


def fold_choice(best: Tuple[np.ndarray, np.ndarray, np.ndarray],
                offer: Tuple[np.ndarray, np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Running minimum of two keyed_choice results"""
    better = (offer[0] < best[0]) | ((offer[0] == best[0]) & (offer[1] < best[1]))
    return tuple(np.where(better, new, old) for new, old in zip(offer, best))


class Walkers(NamedTuple):
    """Flattened walkers of a block: walker u*B + b starts at node u on coordinate b"""
    starts: np.ndarray
    coords: np.ndarray

    @classmethod
    def of(cls, node_count: int, coords: np.ndarray) -> "Walkers":
        return cls(np.repeat(np.arange(node_count, dtype=np.int64), coords.size), np.tile(coords, node_count))

    def keys(self, ctx: SamplingContext, step: int) -> np.ndarray:
        return step_keys(ctx.node_keys, step)[self.starts]


def walk_finish(ctx: SamplingContext, walkers: Walkers, positions: np.ndarray,
                rows: int) -> Tuple[np.ndarray, np.ndarray]:
    """Emit the final node, or in attribute mode a keyed-uniform attribute of it"""
    if not ctx.config.attribute_mode:
        tokens = positions
    else:
        _, _, ranks = keyed_choice(ctx.config.seed, walkers.coords, walkers.keys(ctx, ctx.config.depth + 1),
                                   positions, ctx.init_ptr, ctx.init_items, ctx.item_keys,
                                   np.arange(ctx.universe_size, dtype=np.int64))
        tokens = ctx.to_universe(ranks)
    tokens = tokens.reshape(ctx.node_count, rows)
    status = np.where(tokens >= 0, CellStatus.SAMPLED.value, CellStatus.EMPTY.value).astype(np.int8)
    return tokens, status


def _walk_block(g: Graph, ctx: SamplingContext, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    walkers = Walkers.of(ctx.node_count, coords)
    positions = walkers.starts.copy()
    for step in range(1, ctx.config.depth + 1):
        _, _, nxt = keyed_choice(ctx.config.seed, walkers.coords, walkers.keys(ctx, step), positions,
                                 g.indptr, g.indices, ctx.node_keys, ctx.node_ranks)
        positions = np.where(nxt >= 0, nxt, positions)
    return walk_finish(ctx, walkers, positions, coords.size)


# -- builders -----------------------------------------------------------------

def sample_block(g: Graph, ctx: SamplingContext, coords: np.ndarray,
                 thresholds: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Tokens and statuses for a block of coordinate indices, shaped (n, len(coords))"""
    coords = np.asarray(coords, dtype=np.uint64)
    method = ctx.config.method
    if ctx.universe_size == 0:
        shape = (ctx.node_count, coords.size)
        return np.full(shape, NO_TOKEN, dtype=np.int64), np.full(shape, CellStatus.EMPTY.value, dtype=np.int8)
    if method == SamplingMethod.L0:
        return _l0_block(g, ctx, coords)
    if method == SamplingMethod.RW:
        return _walk_block(g, ctx, coords)
    return _counter_block(g, ctx, coords, thresholds)


def coordinate_blocks(dimensions: int, block_size: int) -> List[np.ndarray]:
    return [np.arange(start, min(start + block_size, dimensions), dtype=np.uint64)
            for start in range(0, dimensions, block_size)]


def assemble_embedding(ctx: SamplingContext, parts: Iterable[Tuple[np.ndarray, np.ndarray]],
                       thresholds: np.ndarray) -> Tuple[EmbeddingMatrix, CoordinateDiagnostics]:
    parts = list(parts)
    tokens = np.concatenate([p[0] for p in parts], axis=1)
    status = np.concatenate([p[1] for p in parts], axis=1)
    header = ctx.config.header_fields(ctx.node_count)
    emb = EmbeddingMatrix(ctx.node_tokens, ctx.universe, tokens, status, header, ctx.config)
    return emb, CoordinateDiagnostics.from_status(status, thresholds)


def build_embedding(g: Graph, cfg: SamplerConfig, attrs: Optional[AttributeTable] = None,
                    workers: int = 1) -> Tuple[EmbeddingMatrix, CoordinateDiagnostics]:
    """Sample all d coordinates; the result does not depend on `workers`"""
    if workers < 1:
        raise ValueError("workers must be at least 1")
    ctx = build_context(g.tokens, cfg, attrs if cfg.attribute_mode else None)
    if cfg.method.uses_sketch:
        ensure_exact_counts(g, cfg.depth, ctx.initial_sizes())

    logger.info("Embedding build started", method=cfg.method.value, k=cfg.depth, d=cfg.dimensions,
                sketch=ctx.capacity or None, workers=workers, nodes=g.node_count)
    thresholds = _thresholds(g, ctx)
    blocks = coordinate_blocks(cfg.dimensions, cfg.block_size)

    def run(coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return sample_block(g, ctx, coords, thresholds)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(coords) for coords in blocks]

    emb, diagnostics = assemble_embedding(ctx, parts, thresholds)
    logger.info("Embedding build finished", method=cfg.method.value, **diagnostics.totals())
    return emb, diagnostics


def sample_coordinates(g: Graph, cfg: SamplerConfig, coords: Sequence[int],
                       attrs: Optional[AttributeTable] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Columns for arbitrary coordinate indices, shaped (n, len(coords))"""
    ctx = build_context(g.tokens, cfg, attrs if cfg.attribute_mode else None)
    if cfg.method.uses_sketch:
        ensure_exact_counts(g, cfg.depth, ctx.initial_sizes())
    thresholds = _thresholds(g, ctx)
    coords = np.asarray(coords, dtype=np.uint64)
    parts = [sample_block(g, ctx, coords[i:i + cfg.block_size], thresholds)
             for i in range(0, coords.size, cfg.block_size)]
    return np.concatenate([p[0] for p in parts], axis=1), np.concatenate([p[1] for p in parts], axis=1)


def _single(g: Graph, cfg: SamplerConfig, coord: int, attrs: Optional[AttributeTable]) -> CoordinateSample:
    tokens, status = sample_coordinates(g, cfg, [coord], attrs)
    return CoordinateSample(tokens[:, 0], status[:, 0])


def sample_l0_coordinate(g: Graph, k: int, coord: int, seed: int,
                         attrs: Optional[AttributeTable] = None) -> CoordinateSample:
    cfg = SamplerConfig(method=SamplingMethod.L0, depth=k, dimensions=1, seed=seed,
                        attribute_mode=attrs is not None)
    return _single(g, cfg, coord, attrs)


def sample_l1_coordinate(g: Graph, k: int, sketch_size: int, coord: int, seed: int,
                         fallback_policy: FallbackPolicy = FallbackPolicy.HEAVIEST,
                         attrs: Optional[AttributeTable] = None) -> CoordinateSample:
    cfg = SamplerConfig(method=SamplingMethod.L1, depth=k, dimensions=1, sketch_size=sketch_size, seed=seed,
                        fallback_policy=fallback_policy, attribute_mode=attrs is not None)
    return _single(g, cfg, coord, attrs)


def sample_l2_coordinate(g: Graph, k: int, sketch_size: int, epsilon: float, coord: int, seed: int,
                         fallback_policy: FallbackPolicy = FallbackPolicy.HEAVIEST,
                         attrs: Optional[AttributeTable] = None) -> CoordinateSample:
    cfg = SamplerConfig(method=SamplingMethod.L2, depth=k, dimensions=1, sketch_size=sketch_size,
                        norm_epsilon=epsilon, seed=seed, fallback_policy=fallback_policy,
                        attribute_mode=attrs is not None)
    return _single(g, cfg, coord, attrs)


def random_walk_coordinate(g: Graph, k: int, coord: int, seed: int,
                           attrs: Optional[AttributeTable] = None) -> CoordinateSample:
    cfg = SamplerConfig(method=SamplingMethod.RW, depth=k, dimensions=1, seed=seed,
                        attribute_mode=attrs is not None)
    return _single(g, cfg, coord, attrs)
