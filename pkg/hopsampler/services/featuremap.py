"""
Hamming kernel over sampled embeddings and its binary explicit feature map
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .hashing import TabulationHasher
from .sampler import EmbeddingMatrix

NULL_TOKEN = -1


@dataclass(frozen=True)
class DiscreteVector:
    """d positional tokens over a universe of size N; NULL_TOKEN never matches"""
    tokens: Tuple[int, ...]
    universe_size: int

    def __post_init__(self):
        for token in self.tokens:
            if token != NULL_TOKEN and not 0 <= token < self.universe_size:
                raise ValueError(f"token {token} outside universe of size {self.universe_size}")

    @property
    def dimensions(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_embedding(cls, emb: EmbeddingMatrix, node: int) -> "DiscreteVector":
        return cls(tuple(int(t) for t in emb.tokens[node]), len(emb.universe))


@dataclass(frozen=True, eq=False)
class SparseBinaryMap:
    """Active indices of a {0,1}^D vector, strictly increasing"""
    dimension: int
    active: np.ndarray

    def __post_init__(self):
        if self.active.size and (self.active[0] < 0 or self.active[-1] >= self.dimension):
            raise ValueError("active index outside [0, D)")
        if np.any(np.diff(self.active) <= 0):
            raise ValueError("active indices must be strictly increasing")

    def __len__(self) -> int:
        return int(self.active.size)


def feature_dimension(dimensions: int, epsilon: float) -> int:
    """D = ceil(d / eps), computed on the decimal value of eps"""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    return math.ceil(Fraction(dimensions) / Fraction(repr(epsilon)))


def hamming_kernel(x: DiscreteVector, y: DiscreteVector) -> int:
    if x.dimensions != y.dimensions:
        raise ValueError(f"dimension mismatch: {x.dimensions} vs {y.dimensions}")
    a = np.asarray(x.tokens, dtype=np.int64)
    b = np.asarray(y.tokens, dtype=np.int64)
    return int(((a == b) & (a != NULL_TOKEN)).sum())


def _virtual_indices(tokens: np.ndarray, universe_size: int) -> np.ndarray:
    """Position i holding token t lights index i*N + t of the Nd-long indicator vector"""
    positions = np.arange(tokens.shape[-1], dtype=np.int64)
    return positions * universe_size + tokens


def explicit_map(x: DiscreteVector, epsilon: float, hasher: TabulationHasher) -> SparseBinaryMap:
    dimension = feature_dimension(x.dimensions, epsilon)
    tokens = np.asarray(x.tokens, dtype=np.int64)
    indices = _virtual_indices(tokens, x.universe_size)[tokens != NULL_TOKEN]
    # colliding indices share one bucket set to 1, never summed
    return SparseBinaryMap(dimension, np.unique(hasher.buckets(indices, dimension)))


def explicit_map_rows(emb: EmbeddingMatrix, epsilon: float, hasher: TabulationHasher) -> List[SparseBinaryMap]:
    """explicit_map of every embedding row"""
    dimension = feature_dimension(emb.dimensions, epsilon)
    tokens = np.asarray(emb.tokens, dtype=np.int64)
    present = tokens != NULL_TOKEN
    indices = np.where(present, _virtual_indices(tokens, len(emb.universe)), 0)
    buckets = hasher.buckets(indices.ravel(), dimension).reshape(tokens.shape)
    return [SparseBinaryMap(dimension, np.unique(row[mask])) for row, mask in zip(buckets, present)]


def map_inner_product(a: SparseBinaryMap, b: SparseBinaryMap) -> int:
    if a.dimension != b.dimension:
        raise ValueError(f"feature dimension mismatch: {a.dimension} vs {b.dimension}")
    return int(np.intersect1d(a.active, b.active, assume_unique=True).size)


def export_sparse(maps: Sequence[SparseBinaryMap], labels: Optional[Sequence[Optional[int]]] = None) -> str:
    """One `label idx:1 idx:1 ...` line per node; label 0 when absent"""
    if labels is not None and len(labels) != len(maps):
        raise ValueError("one label per map expected")
    lines = []
    for i, m in enumerate(maps):
        label = labels[i] if labels is not None and labels[i] is not None else 0
        lines.append(" ".join([str(label)] + [f"{idx}:1" for idx in m.active.tolist()]))
    return "\n".join(lines) + "\n" if lines else ""
