"""
Embedding quality harnesses: pairwise overlap, kernel approximation, link
prediction by overlap ranking, and the oracle checks behind `hopsampler check`.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, TextIO, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from structlog import get_logger

from ..errors import DataError
from ..models import CellStatus, SamplingMethod
from .featuremap import SparseBinaryMap, explicit_map_rows, map_inner_product
from .graph_core import AttributeTable, Graph, build_graph
from .hashing import TabulationHasher
from .oracle import exact_sampling_distribution, jaccard, minsum_similarity
from .sampler import EmbeddingMatrix

logger = get_logger()

DISTRIBUTION_TOLERANCE = {SamplingMethod.L0: 0.03, SamplingMethod.L1: 0.05,
                          SamplingMethod.L2: 0.06, SamplingMethod.RW: 0.03}
COLLISION_TOLERANCE = {SamplingMethod.L0: 0.03, SamplingMethod.L1: 0.05, SamplingMethod.L2: 0.06}


# -- pair sampling ----------------------------------------------------------

def _row_starts(n: int) -> np.ndarray:
    """Index of pair (i, i+1) in the row-major enumeration of pairs i < j"""
    i = np.arange(n, dtype=np.int64)
    return i * (2 * n - i - 1) // 2


def pair_index(n: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    return _row_starts(n)[i] + (j - i - 1)


def decode_pairs(n: int, index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    starts = _row_starts(n)
    i = np.searchsorted(starts, index, side="right") - 1
    return i, index - starts[i] + i + 1


def sample_pairs(n: int, count: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """`count` distinct unordered node pairs, uniformly without replacement, in pair order"""
    total = n * (n - 1) // 2
    if count < 1:
        raise ValueError("pair count must be at least 1")
    if count > total:
        raise DataError(f"cannot sample {count} pairs from {n} nodes ({total} pairs exist)")
    picks = np.sort(np.random.default_rng(seed).choice(total, size=count, replace=False))
    return decode_pairs(n, picks)


def pair_overlaps(emb: EmbeddingMatrix, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Hamming kernel of rows i and j, vectorized over pairs"""
    a, b = emb.tokens[i], emb.tokens[j]
    return ((a == b) & (a >= 0)).sum(axis=1)


# -- overlap and kernel reports ----------------------------------------------

@dataclass(frozen=True)
class OverlapReport:
    first: np.ndarray
    second: np.ndarray
    overlaps: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.overlaps.mean())

    @property
    def median(self) -> float:
        return float(np.median(self.overlaps))

    def to_frame(self, node_tokens: Sequence[str]) -> pd.DataFrame:
        tokens = np.asarray(node_tokens, dtype=object)
        return pd.DataFrame({"u": tokens[self.first], "v": tokens[self.second], "overlap": self.overlaps})


def average_overlap(emb: EmbeddingMatrix, pairs: int, seed: int) -> OverlapReport:
    i, j = sample_pairs(emb.node_count, pairs, seed)
    return OverlapReport(i, j, pair_overlaps(emb, i, j))


@dataclass(frozen=True)
class KernelReport:
    first: np.ndarray
    second: np.ndarray
    exact: np.ndarray
    approximate: np.ndarray
    dimension: int

    @property
    def errors(self) -> np.ndarray:
        return np.abs(self.approximate - self.exact)

    @property
    def mean_abs_error(self) -> float:
        return float(self.errors.mean())

    @property
    def exact_fraction(self) -> float:
        return float((self.errors == 0).mean())


def kernel_approximation(emb: EmbeddingMatrix, epsilon: float, seed: int, pairs: int) -> KernelReport:
    """Exact Hamming kernel against explicit-map inner products on sampled pairs"""
    maps = explicit_map_rows(emb, epsilon, TabulationHasher(seed))
    i, j = sample_pairs(emb.node_count, pairs, seed)
    approximate = np.array([map_inner_product(maps[a], maps[b]) for a, b in zip(i.tolist(), j.tolist())],
                           dtype=np.int64)
    return KernelReport(i, j, pair_overlaps(emb, i, j), approximate, maps[0].dimension)


# -- link prediction ---------------------------------------------------------

@dataclass(frozen=True)
class LinkPredTask:
    graph: Graph
    residual: Graph
    held_out: FrozenSet[Tuple[int, int]]
    candidates: np.ndarray  # (c, 2) pairs i < j over residual dense ids
    cutoff: int

    def held_out_mask(self) -> np.ndarray:
        n = self.residual.node_count
        held = np.array(sorted(self.held_out), dtype=np.int64).reshape(-1, 2)
        held_index = pair_index(n, held[:, 0], held[:, 1])
        return np.isin(pair_index(n, self.candidates[:, 0], self.candidates[:, 1]), held_index)

    @property
    def baseline(self) -> float:
        """Precision of a random ranking"""
        return float(self.held_out_mask().mean()) if len(self.candidates) else 0.0


@dataclass(frozen=True)
class LinkPredMetrics:
    cutoff: int
    hits: int
    precision: float
    recall: float


def make_linkpred_task(g: Graph, holdout_frac: float, pair_frac: float, cutoff: int, seed: int) -> LinkPredTask:
    """Hold out edges while the graph stays connected, then sample candidate pairs.

    Candidates are drawn from pairs that are not residual edges, so every held-out
    edge is eligible and residual edges never are.
    """
    if g.directed:
        raise DataError("link prediction needs an undirected graph")
    if not 0 < holdout_frac < 1:
        raise ValueError("holdout fraction must be in (0, 1)")
    if not 0 < pair_frac <= 1:
        raise ValueError("pair fraction must be in (0, 1]")

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.node_count))
    nxg.add_edges_from(g.edges())
    if not nx.is_connected(nxg):
        raise DataError("graph is not connected")

    edges = list(g.edges())
    target = math.floor(Fraction(repr(holdout_frac)) * len(edges))
    if target == 0:
        raise DataError(f"holdout fraction {holdout_frac} of {len(edges)} edges removes nothing")

    rng = np.random.default_rng(seed)
    held: List[Tuple[int, int]] = []
    for idx in rng.permutation(len(edges)).tolist():
        if len(held) == target:
            break
        u, v = edges[idx]
        nxg.remove_edge(u, v)
        if nx.has_path(nxg, u, v):
            held.append((u, v))
        else:
            nxg.add_edge(u, v)
    if len(held) < target:
        achieved = len(held) / len(edges)
        raise DataError(f"only {achieved:.3f} of edges can be held out without disconnecting "
                        f"(wanted {holdout_frac})")

    residual = build_graph(((g.token(u), g.token(v)) for u, v in nxg.edges()), manifest=g.tokens)

    n = g.node_count
    total = n * (n - 1) // 2
    residual_edges = np.array([(min(u, v), max(u, v)) for u, v in residual.edges()], dtype=np.int64).reshape(-1, 2)
    taken = np.sort(pair_index(n, residual_edges[:, 0], residual_edges[:, 1]))
    free = total - taken.size
    count = max(1, math.floor(Fraction(repr(pair_frac)) * free))
    picks = np.sort(rng.choice(free, size=count, replace=False))
    # q-th free pair index = q + number of taken indices at or below it
    shifted = taken - np.arange(taken.size)
    chosen = picks + np.searchsorted(shifted, picks, side="right")
    i, j = decode_pairs(n, chosen)

    logger.info("Link prediction task built", held_out=len(held), candidates=count, cutoff=cutoff)
    return LinkPredTask(g, residual, frozenset(held), np.column_stack([i, j]), cutoff)


def _candidate_scores(task: LinkPredTask, emb: EmbeddingMatrix,
                      maps: Optional[Sequence[SparseBinaryMap]]) -> np.ndarray:
    if emb.node_tokens != task.residual.tokens:
        raise DataError("embedding rows do not match the residual graph's nodes")
    i, j = task.candidates[:, 0], task.candidates[:, 1]
    if maps is None:
        return pair_overlaps(emb, i, j)
    return np.array([map_inner_product(maps[a], maps[b]) for a, b in zip(i.tolist(), j.tolist())],
                    dtype=np.int64)


def precision_recall_curve(task: LinkPredTask, emb: EmbeddingMatrix, cutoffs: Sequence[int],
                           maps: Optional[Sequence[SparseBinaryMap]] = None) -> List[LinkPredMetrics]:
    """Rank candidates by overlap (descending, ties by pair) and score every cutoff.

    With `maps`, overlaps are explicit-map inner products instead of exact kernels.
    """
    scores = _candidate_scores(task, emb, maps)
    order = np.lexsort((task.candidates[:, 1], task.candidates[:, 0], -scores))
    cumulative = np.cumsum(task.held_out_mask()[order])
    results = []
    for cutoff in cutoffs:
        if not 1 <= cutoff <= len(order):
            raise DataError(f"cutoff {cutoff} outside 1..{len(order)} candidate pairs")
        hits = int(cumulative[cutoff - 1])
        results.append(LinkPredMetrics(cutoff, hits, hits / cutoff, hits / len(task.held_out)))
    return results


def precision_recall_at_k(task: LinkPredTask, emb: EmbeddingMatrix,
                          maps: Optional[Sequence[SparseBinaryMap]] = None) -> Tuple[float, float]:
    metrics = precision_recall_curve(task, emb, [task.cutoff], maps)[0]
    return metrics.precision, metrics.recall


# -- empirical statistics ------------------------------------------------------

def empirical_distribution(emb: EmbeddingMatrix, node: int, sampled_only: bool = True) -> Dict[int, float]:
    """Frequency of each universe id in a node's row"""
    row = emb.tokens[node]
    keep = emb.status[node] == CellStatus.SAMPLED.value if sampled_only else row >= 0
    values, counts = np.unique(row[keep], return_counts=True)
    if counts.sum() == 0:
        return {}
    return {int(v): float(c) / float(counts.sum()) for v, c in zip(values, counts)}


def collision_rate(emb: EmbeddingMatrix, u: int, v: int, sampled_only: bool = True) -> float:
    """Share of coordinates where u and v hold the same token; NaN when no coordinate qualifies"""
    a, b = emb.tokens[u], emb.tokens[v]
    if sampled_only:
        keep = (emb.status[u] == CellStatus.SAMPLED.value) & (emb.status[v] == CellStatus.SAMPLED.value)
    else:
        keep = (a >= 0) & (b >= 0)
    if not keep.any():
        return math.nan
    return float((a[keep] == b[keep]).mean())


def total_variation(p: Dict[int, float], q: Dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(z, 0.0) - q.get(z, 0.0)) for z in keys)


@dataclass(frozen=True)
class CheckResult:
    check: str
    subject: str
    measured: float
    expected: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        within = not math.isnan(self.measured) and abs(self.measured - self.expected) <= self.tolerance
        object.__setattr__(self, "passed", within)


def distribution_checks(g: Graph, emb: EmbeddingMatrix, method: SamplingMethod, k: int, nodes: Sequence[int],
                        attrs: Optional[AttributeTable] = None) -> List[CheckResult]:
    """TV distance between each node's sampled cells and its target law"""
    method = SamplingMethod(method)
    tolerance = DISTRIBUTION_TOLERANCE[method]
    results = []
    for u in nodes:
        target = exact_sampling_distribution(g, u, k, method, attrs)
        observed = empirical_distribution(emb, u)
        measured = total_variation(observed, target) if observed else math.nan
        results.append(CheckResult("tv", g.token(u), measured, 0.0, tolerance))
    return results


def collision_checks(g: Graph, emb: EmbeddingMatrix, method: SamplingMethod, k: int,
                     pairs: Sequence[Tuple[int, int]], attrs: Optional[AttributeTable] = None) -> List[CheckResult]:
    """Collision rate of each pair against Jaccard (l0) or min-sum similarity (l1/l2)"""
    method = SamplingMethod(method)
    if method not in COLLISION_TOLERANCE:
        return []
    results = []
    for u, v in pairs:
        if method == SamplingMethod.L0:
            expected = jaccard(g, u, v, k) if attrs is None else _attribute_jaccard(g, u, v, k, attrs)
        else:
            expected = minsum_similarity(g, u, v, k, 1 if method == SamplingMethod.L1 else 2, attrs)
        results.append(CheckResult("collision", f"{g.token(u)}|{g.token(v)}", collision_rate(emb, u, v),
                                   expected, COLLISION_TOLERANCE[method]))
    return results


def _attribute_jaccard(g: Graph, u: int, v: int, k: int, attrs: AttributeTable) -> float:
    a = set(exact_sampling_distribution(g, u, k, SamplingMethod.L0, attrs))
    b = set(exact_sampling_distribution(g, v, k, SamplingMethod.L0, attrs))
    union = a | b
    return len(a & b) / len(union) if union else 0.0


def checks_frame(results: Sequence[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame([{"check": r.check, "subject": r.subject, "measured": r.measured,
                          "expected": r.expected, "tolerance": r.tolerance, "passed": r.passed}
                         for r in results],
                        columns=["check", "subject", "measured", "expected", "tolerance", "passed"])


def write_report(handle: TextIO, frame: pd.DataFrame, meta: Dict[str, object]) -> None:
    """TSV report preceded by a `# key=value` metadata line"""
    handle.write("# " + "\t".join(f"{key}={value}" for key, value in meta.items()) + "\n")
    frame.to_csv(handle, sep="\t", index=False, float_format="%.6f", lineterminator="\n")
