import os
from typing import Iterable, Optional, Sequence, Tuple

import networkx as nx
import pytest

os.environ.setdefault("HOPSAMPLER_ENV", "testing")

from hopsampler.services.graph_core import Graph, load_edge_list  # noqa: E402


def edge_lines(edges: Iterable[Tuple[str, str]]) -> list:
    return [f"{a} {b}\n" for a, b in edges]


def graph_from_edges(edges: Iterable[Tuple[str, str]], directed: bool = False,
                     manifest: Optional[Sequence[str]] = None) -> Graph:
    """Serialize to the edge-list format and load it back"""
    return load_edge_list(edge_lines(edges), directed=directed, manifest=manifest)


def graph_from_networkx(nxg: nx.Graph) -> Graph:
    tokens = [f"n{node}" for node in nxg.nodes()]
    return graph_from_edges(((f"n{u}", f"n{v}") for u, v in nxg.edges()), directed=nxg.is_directed(),
                            manifest=tokens)


def write_edges(path, edges: Iterable[Tuple[str, str]]) -> str:
    path.write_text("".join(edge_lines(edges)), encoding="utf-8")
    return str(path)


@pytest.fixture
def p3() -> Graph:
    return graph_from_edges([("a", "b"), ("b", "c")])


@pytest.fixture
def triangle() -> Graph:
    return graph_from_edges([("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def c4() -> Graph:
    return graph_from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


@pytest.fixture
def c10() -> Graph:
    return graph_from_networkx(nx.cycle_graph(10))


@pytest.fixture
def star() -> Graph:
    return graph_from_edges([("hub", f"leaf{i}") for i in range(5)])


@pytest.fixture
def tree() -> Graph:
    return graph_from_networkx(nx.balanced_tree(2, 3))


@pytest.fixture
def gnp50() -> Graph:
    """G(50, 0.1) with isolated nodes kept via the manifest"""
    return graph_from_networkx(nx.gnp_random_graph(50, 0.1, seed=42))


@pytest.fixture
def planted_partition() -> Graph:
    return graph_from_networkx(nx.planted_partition_graph(2, 50, 0.3, 0.02, seed=3))
