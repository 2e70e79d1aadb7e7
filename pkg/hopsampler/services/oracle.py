"""
Brute-force reference computations: k-hop frequency vectors, norms, similarities
and exact sampling laws. Ground truth for tests and the `oracle`/`check` commands.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from structlog import get_logger

from ..errors import DataError
from ..models import CellStatus, FallbackPolicy, SamplingMethod
from .graph_core import AttributeTable, Graph, khop_neighborhood_set
from .hashing import token_keys, uniform_grid

logger = get_logger()

EXACT_COUNT_LIMIT = 2.0 ** 53


@dataclass(frozen=True)
class FrequencyVector:
    """f^k_u as a sparse map node id -> walk count"""
    node: int
    depth: int
    entries: Dict[int, float] = field(default_factory=dict)

    def support(self) -> set:
        return set(self.entries)

    def to_array(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=np.float64)
        for z, count in self.entries.items():
            out[z] = count
        return out


def _check_depth(k: int) -> None:
    if k < 0:
        raise ValueError("k must be non-negative")


def frequency_array(g: Graph, u: int, k: int) -> np.ndarray:
    """Dense f^k_u via the entrywise recurrence f^k_u = f^{k-1}_u + sum_{v in N(u)} f^{k-1}_v"""
    g.check_node(u)
    _check_depth(k)
    src, dst = g.arcs()
    x = np.zeros(g.node_count, dtype=np.float64)
    x[u] = 1.0
    # row u of (I + A)^k, built as x <- x (I + A)
    for _ in range(k):
        nxt = x.copy()
        np.add.at(nxt, dst, x[src])
        x = nxt
    return x


def universe_frequency(g: Graph, u: int, k: int, attrs: Optional[AttributeTable] = None) -> np.ndarray:
    """f^k_u over the sampling universe: nodes, or attributes when a table is given"""
    f = frequency_array(g, u, k)
    if attrs is None:
        return f
    out = np.zeros(attrs.attribute_universe_size, dtype=np.float64)
    for z in np.flatnonzero(f):
        for a in attrs.attributes_of(int(z)):
            out[a] += f[z]
    return out


def khop_frequency(g: Graph, u: int, k: int) -> FrequencyVector:
    f = frequency_array(g, u, k)
    return FrequencyVector(u, k, {int(z): float(f[z]) for z in np.flatnonzero(f)})


def l1_norms(g: Graph, k: int, initial: Optional[np.ndarray] = None, dtype=np.float64) -> np.ndarray:
    """||f^k_u||_1 for every u by scalar propagation, O(mk)"""
    _check_depth(k)
    src, dst = g.arcs()
    norms = np.ones(g.node_count, dtype=dtype) if initial is None else np.asarray(initial, dtype=dtype).copy()
    for _ in range(k):
        nxt = norms.copy()
        np.add.at(nxt, src, norms[dst])
        norms = nxt
    return norms


def l1_norm_exact(g: Graph, u: int, k: int) -> float:
    g.check_node(u)
    return float(l1_norms(g, k)[u])


def l2_norm_exact(g: Graph, u: int, k: int) -> float:
    return float(np.linalg.norm(frequency_array(g, u, k)))


def ensure_exact_counts(g: Graph, k: int, initial: Optional[np.ndarray] = None) -> None:
    """Refuse depths whose walk counts leave the exactly representable range"""
    peak = float(l1_norms(g, k, initial).max(initial=0.0))
    if peak > EXACT_COUNT_LIMIT:
        raise DataError(f"k={k} overflows exact walk counts (peak L1 norm {peak:.3g} > 2^53)")


def jaccard(g: Graph, u: int, v: int, k: int) -> float:
    a = khop_neighborhood_set(g, u, k)
    b = khop_neighborhood_set(g, v, k)
    return len(a & b) / len(a | b)


def _normalized_power(f: np.ndarray, p: int) -> np.ndarray:
    powered = f ** p
    return powered / powered.sum()


def minsum_similarity(g: Graph, u: int, v: int, k: int, p: int,
                      attrs: Optional[AttributeTable] = None) -> float:
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    fu = universe_frequency(g, u, k, attrs)
    fv = universe_frequency(g, v, k, attrs)
    if not fu.any() or not fv.any():
        return 0.0
    value = float(np.minimum(_normalized_power(fu, p), _normalized_power(fv, p)).sum())
    return min(max(value, 0.0), 1.0)


def cosine_and_sqrtcos(g: Graph, u: int, v: int, k: int) -> Tuple[float, float]:
    """Cosine and sqrt-cosine, Σ f_u f_v / (√‖f_u‖₁ √‖f_v‖₁), of two frequency vectors"""
    fu = frequency_array(g, u, k)
    fv = frequency_array(g, v, k)
    cosine = float(fu @ fv / (np.linalg.norm(fu) * np.linalg.norm(fv)))
    sqrt_cosine = float(fu @ fv / math.sqrt(fu.sum() * fv.sum()))
    return cosine, sqrt_cosine


def bounded_sqrt_cosine(g: Graph, u: int, v: int, k: int) -> float:
    """Σ √(f_u f_v) / √(‖f_u‖₁ ‖f_v‖₁): the cosine of the square-rooted vectors, always in [0, 1]"""
    fu = frequency_array(g, u, k)
    fv = frequency_array(g, v, k)
    return float(np.sqrt(fu * fv).sum() / math.sqrt(fu.sum() * fv.sum()))


def random_walk_distribution(g: Graph, u: int, k: int) -> Dict[int, float]:
    """Law of the last node of a k-step uniform random walk; isolated nodes stay put"""
    g.check_node(u)
    _check_depth(k)
    src, dst = g.arcs()
    degrees = g.degrees()
    isolated = degrees == 0
    p = np.zeros(g.node_count, dtype=np.float64)
    p[u] = 1.0
    for _ in range(k):
        nxt = np.where(isolated, p, 0.0)
        np.add.at(nxt, dst, p[src] / degrees[src])
        p = nxt
    return {int(z): float(p[z]) for z in np.flatnonzero(p)}


def exact_sampling_distribution(g: Graph, u: int, k: int, method: SamplingMethod,
                                attrs: Optional[AttributeTable] = None) -> Dict[int, float]:
    """Target law of each sampler: uniform over N_k(u), f/||f||_1, f^2/||f||_2^2, or the walk law"""
    method = SamplingMethod(method)
    if method == SamplingMethod.RW:
        if attrs is not None:
            raise ValueError("random-walk law is defined over nodes only")
        return random_walk_distribution(g, u, k)

    f = universe_frequency(g, u, k, attrs)
    support = np.flatnonzero(f)
    if support.size == 0:
        return {}
    if method == SamplingMethod.L0:
        weights = np.ones(support.size)
    elif method == SamplingMethod.L1:
        weights = f[support]
    else:
        weights = f[support] ** 2
    probs = weights / weights.sum()
    return {int(z): float(p) for z, p in zip(support, probs)}


def _poisson_binomial(probs: np.ndarray) -> np.ndarray:
    dist = np.zeros(probs.size + 1)
    dist[0] = 1.0
    for i, p in enumerate(probs, start=1):
        dist[1:i + 1] = dist[1:i + 1] * (1 - p) + dist[0:i] * p
        dist[0] *= 1 - p
    return dist


def exact_conditional_distribution(g: Graph, u: int, k: int, method: SamplingMethod,
                                   threshold: Optional[float] = None,
                                   attrs: Optional[AttributeTable] = None) -> Tuple[Dict[int, float], float]:
    """Law of the unsketched L1/L2 threshold sampler given success, and the success probability.

    Token z qualifies when r_z <= p_z; conditioned on qualifying its scaled weight has the
    same law for every z, so the heaviest qualifier is uniform over the qualifying set.
    Exact as long as every entry stays below the threshold (p_z <= 1).
    """
    method = SamplingMethod(method)
    if not method.uses_sketch:
        raise ValueError("conditional law applies to l1/l2 only")
    f = universe_frequency(g, u, k, attrs)
    support = np.flatnonzero(f)
    if support.size == 0:
        return {}, 0.0
    values = f[support]
    if method == SamplingMethod.L1:
        t = values.sum() if threshold is None else threshold
        p = values / t
    else:
        t = math.sqrt((values ** 2).sum()) if threshold is None else threshold
        p = (values / t) ** 2
    p = np.minimum(p, 1.0)

    success = 1.0 - float(np.prod(1.0 - p))
    if success <= 0.0:
        return {}, 0.0
    law = {}
    for i, z in enumerate(support):
        others = _poisson_binomial(np.delete(p, i))
        share = float((others / np.arange(1, others.size + 1)).sum())
        law[int(z)] = float(p[i]) * share / success
    return law, success


def reference_sample(g: Graph, k: int, coords: np.ndarray, seed: int, method: SamplingMethod,
                     thresholds: np.ndarray, fallback_policy: FallbackPolicy = FallbackPolicy.HEAVIEST,
                     attrs: Optional[AttributeTable] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Unsketched heavy-hitter sampler over full reweighted vectors.

    Returns (tokens, status), each shaped (n, len(coords)); tokens are universe ids, -1 when empty.
    """
    method = SamplingMethod(method)
    if not method.uses_sketch:
        raise ValueError("reference sampler covers l1/l2 only")
    coords = np.asarray(coords, dtype=np.int64)
    if attrs is None:
        universe_tokens, ranks = g.tokens, g.canonical_ranks()
    else:
        universe_tokens, ranks = attrs.attribute_tokens, attrs.canonical_ranks()

    r = uniform_grid(seed, coords[:, None], token_keys(universe_tokens)[None, :])
    base = 1.0 / r if method == SamplingMethod.L1 else 1.0 / np.sqrt(r)

    tokens = np.full((g.node_count, coords.size), -1, dtype=np.int64)
    status = np.full((g.node_count, coords.size), CellStatus.EMPTY.value, dtype=np.int8)
    for u in range(g.node_count):
        f = universe_frequency(g, u, k, attrs)
        support = np.flatnonzero(f)
        if support.size == 0:
            continue
        weights = f[support][None, :] * base[:, support]
        order = np.lexsort((np.broadcast_to(ranks[support], weights.shape), -weights), axis=-1)
        best = order[:, 0]
        heaviest = weights[np.arange(coords.size), best]
        tokens[u] = support[best]
        sampled = heaviest >= thresholds[u]
        status[u] = np.where(sampled, CellStatus.SAMPLED.value, CellStatus.FALLBACK.value)
        if fallback_policy == FallbackPolicy.EMPTY:
            tokens[u] = np.where(sampled, tokens[u], -1)
            status[u] = np.where(sampled, status[u], CellStatus.EMPTY.value)
    return tokens, status
