"""
Graph ingestion service: edge lists, node manifests, attribute tables and edge streams
"""
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
from structlog import get_logger

from ..errors import DataError, GraphFormatError

logger = get_logger()

COMMENT_PREFIX = "#"


def _data_lines(source: Iterable[str]) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, tokens) for every non-blank, non-comment line"""
    for line_number, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIX):
            continue
        yield line_number, stripped.split()


class Graph:
    """Immutable adjacency over dense node ids with an external token map"""

    def __init__(self, tokens: Sequence[str], indptr: np.ndarray, indices: np.ndarray,
                 directed: bool, edge_count: int, duplicates_dropped: int = 0,
                 self_loops_dropped: int = 0):
        self._tokens = tuple(tokens)
        self._index = {token: node for node, token in enumerate(self._tokens)}
        self._indptr = indptr
        self._indices = indices
        self._indptr.setflags(write=False)
        self._indices.setflags(write=False)
        self.directed = directed
        self.edge_count = edge_count
        self.duplicates_dropped = duplicates_dropped
        self.self_loops_dropped = self_loops_dropped
        self._canonical_ranks: Optional[np.ndarray] = None

    @property
    def node_count(self) -> int:
        return len(self._tokens)

    @property
    def tokens(self) -> Tuple[str, ...]:
        return self._tokens

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def token(self, node: int) -> str:
        self.check_node(node)
        return self._tokens[node]

    def node_id(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise DataError(f"unknown node {token}") from None

    def has_token(self, token: str) -> bool:
        return token in self._index

    def check_node(self, node: int) -> None:
        if not 0 <= node < self.node_count:
            raise DataError(f"node id {node} out of range [0, {self.node_count})")

    def neighbors(self, node: int) -> np.ndarray:
        self.check_node(node)
        return self._indices[self._indptr[node]:self._indptr[node + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def arcs(self) -> Tuple[np.ndarray, np.ndarray]:
        """(src, dst) arrays with dst in N(src), grouped by src"""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        return src, self._indices

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Each edge once; undirected edges as (u, v) with u < v"""
        for u in range(self.node_count):
            for v in self._indices[self._indptr[u]:self._indptr[u + 1]]:
                v = int(v)
                if self.directed or u < v:
                    yield u, v

    def canonical_ranks(self) -> np.ndarray:
        """Rank of each node's external token in lexicographic order"""
        if self._canonical_ranks is None:
            self._canonical_ranks = lexicographic_ranks(self._tokens)
        return self._canonical_ranks

    def _token_edges(self) -> Set[Tuple[str, str]]:
        pairs = set()
        for u, v in self.edges():
            a, b = self._tokens[u], self._tokens[v]
            pairs.add((a, b) if self.directed or a < b else (b, a))
        return pairs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.directed == other.directed
                and set(self._tokens) == set(other._tokens)
                and self._token_edges() == other._token_edges())

    def __hash__(self) -> int:
        return hash((self.directed, frozenset(self._tokens), frozenset(self._token_edges())))

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count}, directed={self.directed})"


def lexicographic_ranks(tokens: Sequence[str]) -> np.ndarray:
    order = sorted(range(len(tokens)), key=tokens.__getitem__)
    ranks = np.empty(len(tokens), dtype=np.int64)
    ranks[order] = np.arange(len(tokens), dtype=np.int64)
    return ranks


def build_graph(pairs: Iterable[Tuple[str, str]], directed: bool = False,
                manifest: Optional[Sequence[str]] = None) -> Graph:
    """Intern token pairs into a Graph, dropping duplicates and self-loops"""
    index: Dict[str, int] = {}
    tokens: List[str] = []

    def intern(token: str) -> int:
        node = index.get(token)
        if node is None:
            node = index[token] = len(tokens)
            tokens.append(token)
        return node

    for token in manifest or ():
        intern(token)

    seen: Set[Tuple[int, int]] = set()
    duplicates = 0
    self_loops = 0
    for a, b in pairs:
        # a token seen only in self-loops would become an isolated node
        if a == b:
            self_loops += 1
            continue
        u, v = intern(a), intern(b)
        key = (u, v) if directed or u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)

    if not tokens:
        raise GraphFormatError("empty input")

    adjacency: List[List[int]] = [[] for _ in tokens]
    for u, v in seen:
        adjacency[u].append(v)
        if not directed:
            adjacency[v].append(u)

    degrees = np.array([len(row) for row in adjacency], dtype=np.int64)
    indptr = np.zeros(len(tokens) + 1, dtype=np.int64)
    np.cumsum(degrees, out=indptr[1:])
    indices = np.fromiter((v for row in adjacency for v in sorted(row)), dtype=np.int64,
                          count=int(indptr[-1]))

    if duplicates or self_loops:
        logger.warning("Dropped edges during ingestion", duplicates=duplicates, self_loops=self_loops)

    return Graph(tokens, indptr, indices, directed, len(seen), duplicates, self_loops)


def load_edge_list(source: Iterable[str], directed: bool = False,
                   manifest: Optional[Sequence[str]] = None) -> Graph:
    """Parse a whitespace-separated edge list; trailing tokens (weights) are ignored"""

    def pairs() -> Iterator[Tuple[str, str]]:
        for line_number, parts in _data_lines(source):
            if len(parts) < 2:
                raise GraphFormatError("expected at least 2 tokens", line_number)
            yield parts[0], parts[1]

    graph = build_graph(pairs(), directed=directed, manifest=manifest)
    logger.info("Graph loaded", nodes=graph.node_count, edges=graph.edge_count, directed=directed)
    return graph


def load_node_manifest(source: Iterable[str]) -> List[str]:
    """One node token per line; repeated tokens are an error"""
    tokens: List[str] = []
    seen: Set[str] = set()
    for line_number, parts in _data_lines(source):
        token = parts[0]
        if token in seen:
            raise GraphFormatError(f"duplicate manifest token {token}", line_number)
        seen.add(token)
        tokens.append(token)
    return tokens


def scan_node_tokens(source: Iterable[str]) -> List[str]:
    """First-appearance node tokens of an edge list, without keeping any edges"""
    tokens: List[str] = []
    seen: Set[str] = set()
    for line_number, parts in _data_lines(source):
        if len(parts) < 2:
            raise GraphFormatError("expected at least 2 tokens", line_number)
        if parts[0] == parts[1]:
            continue
        for token in parts[:2]:
            if token not in seen:
                seen.add(token)
                tokens.append(token)
    if not tokens:
        raise GraphFormatError("empty input")
    return tokens


def reject_repeated_edges(source: Iterable[str], node_tokens: Sequence[str], directed: bool = False) -> int:
    """Raise DataError if an edge occurs twice (either orientation when undirected); returns the edge count.

    Streamed passes cannot drop repeats the way build_graph does, so a streamed file must be simple.
    """
    index = {token: node for node, token in enumerate(node_tokens)}
    sources: List[int] = []
    targets: List[int] = []
    for line_number, parts in _data_lines(source):
        if len(parts) < 2:
            raise GraphFormatError("expected at least 2 tokens", line_number)
        if parts[0] == parts[1]:
            continue
        try:
            u, v = index[parts[0]], index[parts[1]]
        except KeyError as e:
            raise DataError(f"line {line_number}: unknown node {e.args[0]}") from None
        sources.append(u)
        targets.append(v)
    if not sources:
        return 0

    u = np.asarray(sources, dtype=np.uint64)
    v = np.asarray(targets, dtype=np.uint64)
    if not directed:
        u, v = np.minimum(u, v), np.maximum(u, v)
    keys = u * np.uint64(len(node_tokens)) + v
    unique, counts = np.unique(keys, return_counts=True)
    repeated = unique[counts > 1]
    if repeated.size:
        first = int(repeated[0])
        a, b = divmod(first, len(node_tokens))
        raise DataError(f"edge {node_tokens[a]} {node_tokens[b]} occurs more than once "
                        f"({repeated.size} repeated edges); streaming needs a simple edge list")
    return len(sources)


def khop_neighborhood_set(g: Graph, u: int, k: int) -> Set[int]:
    """All nodes within k hops of u, u included"""
    g.check_node(u)
    if k < 0:
        raise ValueError("k must be non-negative")

    reached = {u}
    frontier = deque([(u, 0)])
    while frontier:
        node, depth = frontier.popleft()
        if depth == k:
            continue
        for v in g.neighbors(node):
            v = int(v)
            if v not in reached:
                reached.add(v)
                frontier.append((v, depth + 1))
    return reached


@dataclass(frozen=True)
class AttributeTable:
    """Per-node attribute ids over a separately interned attribute universe"""
    node_attributes: Tuple[Tuple[int, ...], ...]
    attribute_tokens: Tuple[str, ...]

    @property
    def attribute_universe_size(self) -> int:
        return len(self.attribute_tokens)

    def attributes_of(self, node: int) -> Tuple[int, ...]:
        return self.node_attributes[node]

    def tokens_of(self, node: int) -> Set[str]:
        return {self.attribute_tokens[a] for a in self.node_attributes[node]}

    def canonical_ranks(self) -> np.ndarray:
        return lexicographic_ranks(self.attribute_tokens)


def load_attributes(source: Iterable[str], g: Graph) -> AttributeTable:
    """Parse `node<TAB>attr attr ...` lines; nodes absent from the file get no attributes"""
    index: Dict[str, int] = {}
    attribute_tokens: List[str] = []
    per_node: List[Tuple[int, ...]] = [() for _ in range(g.node_count)]
    assigned: Set[int] = set()

    for line_number, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith(COMMENT_PREFIX):
            continue
        if "\t" not in line:
            raise GraphFormatError("expected node<TAB>attributes", line_number)
        node_token, _, rest = line.partition("\t")
        node_token = node_token.strip()
        if not g.has_token(node_token):
            raise DataError(f"line {line_number}: unknown node {node_token}")
        node = g.node_id(node_token)
        if node in assigned:
            raise DataError(f"line {line_number}: duplicate attribute line for node {node_token}")
        assigned.add(node)

        ids: List[int] = []
        for token in rest.split():
            attr = index.get(token)
            if attr is None:
                attr = index[token] = len(attribute_tokens)
                attribute_tokens.append(token)
            if attr not in ids:
                ids.append(attr)
        per_node[node] = tuple(ids)

    logger.info("Attributes loaded", nodes_with_attributes=len(assigned),
                universe=len(attribute_tokens))
    return AttributeTable(tuple(per_node), tuple(attribute_tokens))


class EdgeStream:
    """Replayable sequence of dense-id edge pairs; each pass may reorder edges"""

    def __init__(self, node_tokens: Sequence[str], replay: Callable[[int], Iterable[Tuple[int, int]]],
                 directed: bool = False):
        self.node_tokens = tuple(node_tokens)
        self.directed = directed
        self._replay = replay

    @property
    def node_count(self) -> int:
        return len(self.node_tokens)

    def edges(self, pass_index: int) -> Iterator[Tuple[int, int]]:
        return iter(self._replay(pass_index))

    @classmethod
    def from_graph(cls, g: Graph, shuffle_seed: Optional[int] = None) -> "EdgeStream":
        """Stream a materialized graph; with a seed every pass is a fresh permutation"""
        edges = list(g.edges())

        def replay(pass_index: int) -> Iterator[Tuple[int, int]]:
            if shuffle_seed is None:
                return iter(edges)
            rng = np.random.default_rng([shuffle_seed, pass_index])
            order = rng.permutation(len(edges))
            flips = rng.random(len(edges)) < 0.5
            return ((edges[i][1], edges[i][0]) if flip and not g.directed else edges[i]
                    for i, flip in zip(order.tolist(), flips.tolist()))

        return cls(g.tokens, replay, directed=g.directed)

    @classmethod
    def from_file(cls, path: Path, node_tokens: Sequence[str], directed: bool = False) -> "EdgeStream":
        """Re-read an edge-list file on every pass; self-loops are skipped"""
        index = {token: node for node, token in enumerate(node_tokens)}

        def replay(pass_index: int) -> Iterator[Tuple[int, int]]:
            with open(path, encoding="utf-8") as handle:
                for line_number, parts in _data_lines(handle):
                    if len(parts) < 2:
                        raise GraphFormatError("expected at least 2 tokens", line_number)
                    if parts[0] == parts[1]:
                        continue
                    try:
                        u, v = index[parts[0]], index[parts[1]]
                    except KeyError as e:
                        raise DataError(f"line {line_number}: unknown node {e.args[0]}") from None
                    yield u, v

        return cls(node_tokens, replay, directed=directed)
