"""
Semi-streaming driver: k passes, bit-identical to the in-memory builder
"""
import networkx as nx
import numpy as np
import pytest

from conftest import graph_from_networkx, write_edges
from hopsampler.errors import DataError
from hopsampler.models import SamplerConfig, SamplingMethod
from hopsampler.services.graph_core import EdgeStream, load_attributes, load_edge_list, scan_node_tokens
from hopsampler.services.sampler import build_embedding
from hopsampler.services.streaming import EdgeFingerprint, streaming_pass_driver


ALL_METHODS = [SamplingMethod.L0, SamplingMethod.L1, SamplingMethod.L2, SamplingMethod.RW]


def config(method, k, d=40, **kwargs) -> SamplerConfig:
    return SamplerConfig(method=method, depth=k, dimensions=d, seed=13, **kwargs)


def counting_stream(g, shuffle_seed=None):
    """Edge stream that records which passes were requested"""
    inner = EdgeStream.from_graph(g, shuffle_seed)
    passes = []

    def replay(pass_index):
        passes.append(pass_index)
        return inner.edges(pass_index)

    return EdgeStream(g.tokens, replay, directed=g.directed), passes


@pytest.mark.parametrize("method", ALL_METHODS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_streaming_matches_in_memory(gnp50, method, k):
    cfg = config(method, k)
    expected, expected_diag = build_embedding(gnp50, cfg)
    stream, passes = counting_stream(gnp50, shuffle_seed=k)
    emb, diag = streaming_pass_driver(stream, cfg, chunk_size=37)
    assert emb.to_text() == expected.to_text()
    assert np.array_equal(emb.status, expected.status)
    assert np.array_equal(diag.thresholds, expected_diag.thresholds, equal_nan=True)
    assert passes == list(range(k))


@pytest.mark.slow
@pytest.mark.parametrize("method", ALL_METHODS)
def test_streaming_is_edge_order_invariant(method):
    g = graph_from_networkx(nx.gnp_random_graph(50, 0.1, seed=7))
    cfg = config(method, 3, d=20)
    expected = build_embedding(g, cfg)[0].to_text()
    for order in range(10):
        emb, _ = streaming_pass_driver(EdgeStream.from_graph(g, shuffle_seed=100 + order), cfg, chunk_size=16)
        assert emb.to_text() == expected


def test_depth_zero_reads_nothing(p3):
    def replay(pass_index):
        raise AssertionError("no pass expected")

    emb, _ = streaming_pass_driver(EdgeStream(p3.tokens, replay), config(SamplingMethod.L1, 0, d=5))
    assert emb.to_text() == build_embedding(p3, config(SamplingMethod.L1, 0, d=5))[0].to_text()


def test_directed_graph():
    g = graph_from_networkx(nx.gnp_random_graph(30, 0.1, seed=3, directed=True))
    for method in ALL_METHODS:
        cfg = config(method, 2)
        emb, _ = streaming_pass_driver(EdgeStream.from_graph(g, shuffle_seed=1), cfg)
        assert emb.to_text() == build_embedding(g, cfg)[0].to_text()


def test_attribute_mode(gnp50):
    lines = [f"{token}\tcolor{i % 4} size{i % 3}\n" for i, token in enumerate(gnp50.tokens) if i % 5]
    attrs = load_attributes(lines, gnp50)
    for method in ALL_METHODS:
        cfg = config(method, 2, attribute_mode=True)
        emb, _ = streaming_pass_driver(EdgeStream.from_graph(gnp50, shuffle_seed=2), cfg, attrs)
        assert emb.to_text() == build_embedding(gnp50, cfg, attrs)[0].to_text()


def test_changed_pass_is_rejected(p3):
    edges = [[(0, 1), (1, 2)], [(0, 1)]]

    def replay(pass_index):
        return iter(edges[min(pass_index, 1)])

    with pytest.raises(DataError):
        streaming_pass_driver(EdgeStream(p3.tokens, replay), config(SamplingMethod.L0, 2))


def test_fingerprint_ignores_orientation_only_when_undirected():
    forward = np.array([[0, 1], [2, 3]])
    backward = np.array([[3, 2], [1, 0]])
    undirected = [EdgeFingerprint(4, directed=False) for _ in range(2)]
    undirected[0].update(forward)
    undirected[1].update(backward)
    assert undirected[0].matches(undirected[1])

    directed = [EdgeFingerprint(4, directed=True) for _ in range(2)]
    directed[0].update(forward)
    directed[1].update(backward)
    assert not directed[0].matches(directed[1])


def test_streaming_from_file(tmp_path):
    nxg = nx.gnp_random_graph(40, 0.12, seed=9)
    path = write_edges(tmp_path / "graph.txt", ((f"n{u}", f"n{v}") for u, v in nxg.edges()))
    with open(path, encoding="utf-8") as handle:
        tokens = scan_node_tokens(handle)
    with open(path, encoding="utf-8") as handle:
        g = load_edge_list(handle)
    cfg = config(SamplingMethod.L2, 2)
    emb, _ = streaming_pass_driver(EdgeStream.from_file(path, tokens), cfg)
    assert emb.to_text() == build_embedding(g, cfg)[0].to_text()
