"""
Command-line surface: subcommands, exit codes, manifests and replay
"""
from pathlib import Path

import networkx as nx
import pytest

from config.config import TestingConfig
from conftest import write_edges
from hopsampler.cli import main
from hopsampler.services.manifest import RunManifest


@pytest.fixture
def workdir(tmp_path, monkeypatch) -> Path:
    monkeypatch.chdir(tmp_path)
    return tmp_path


def networkx_edges(nxg):
    return [(f"n{u}", f"n{v}") for u, v in nxg.edges()]


@pytest.fixture
def graph_file(workdir) -> str:
    write_edges(workdir / "graph.txt", networkx_edges(nx.gnp_random_graph(40, 0.12, seed=9)))
    return "graph.txt"


@pytest.fixture
def p3_file(workdir) -> str:
    write_edges(workdir / "p3.txt", [("a", "b"), ("b", "c")])
    return "p3.txt"


@pytest.fixture
def triangle_file(workdir) -> str:
    write_edges(workdir / "triangle.txt", [("a", "b"), ("b", "c"), ("a", "c")])
    return "triangle.txt"


def read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


# -- embed -------------------------------------------------------------------------

def test_embed_writes_outputs_and_manifest(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l1", "--k", "2", "--output", "emb.tsv"]) == 0
    for name in ("emb.tsv", "emb.tsv.diag.tsv", "emb.tsv.thresholds.tsv", "emb.tsv.manifest"):
        assert (workdir / name).exists()
    assert read("emb.tsv").startswith("#")

    manifest = RunManifest.read("emb.tsv.manifest")
    assert manifest.command == "embed"
    assert manifest.argv[0] == "embed"
    assert Path(manifest.workdir).resolve() == workdir.resolve()
    assert set(manifest.outputs) == {"embedding", "diagnostics", "thresholds"}


def test_embed_reruns_are_byte_identical(workdir, graph_file):
    for name in ("first.tsv", "second.tsv"):
        assert main(["embed", graph_file, "--method", "l2", "--seed", "5", "--output", name]) == 0
    assert read("first.tsv") == read("second.tsv")


def test_embed_is_independent_of_workers(workdir, graph_file):
    for workers in ("1", "8"):
        assert main(["embed", graph_file, "--method", "rw", "--k", "3", "--d", "200", "--workers", workers,
                     "--output", f"w{workers}.tsv"]) == 0
    assert read("w1.tsv") == read("w8.tsv")


def test_streaming_embed_matches_in_memory(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l2", "--output", "memory.tsv"]) == 0
    assert main(["embed", graph_file, "--method", "l2", "--streaming", "--output", "stream.tsv"]) == 0
    assert read("memory.tsv") == read("stream.tsv")


def test_streaming_rejects_repeated_edges(workdir):
    (workdir / "repeats.txt").write_text("a b\nb c\nb a\nc d\n", encoding="utf-8")
    assert main(["embed", "repeats.txt", "--method", "l1", "--k", "2", "--d", "20", "--output", "memory.tsv"]) == 0
    assert main(["embed", "repeats.txt", "--method", "l1", "--k", "2", "--d", "20", "--streaming",
                 "--output", "stream.tsv"]) == 2
    assert not (workdir / "stream.tsv").exists()
    (workdir / "nodes.txt").write_text("a\nb\nc\nd\n", encoding="utf-8")
    assert main(["embed", "repeats.txt", "--method", "l1", "--nodes", "nodes.txt", "--streaming",
                 "--output", "stream.tsv"]) == 2


def test_streaming_keeps_reversed_arcs_when_directed(workdir):
    (workdir / "arcs.txt").write_text("a b\nb a\nb c\n", encoding="utf-8")
    assert main(["embed", "arcs.txt", "--method", "l0", "--directed", "--output", "memory.tsv"]) == 0
    assert main(["embed", "arcs.txt", "--method", "l0", "--directed", "--streaming", "--output", "stream.tsv"]) == 0
    assert read("memory.tsv") == read("stream.tsv")


@pytest.mark.parametrize("argv", [
    ["embed", "graph.txt", "--method", "l0", "--epsilon", "0.1", "--output", "x.tsv"],
    ["embed", "graph.txt", "--method", "rw", "--sketch", "12", "--output", "x.tsv"],
    ["embed", "graph.txt", "--method", "l1", "--no-such-flag", "--output", "x.tsv"],
    ["embed", "graph.txt", "--method", "l1", "--workers", "0", "--output", "x.tsv"],
    ["embed", "graph.txt", "--method", "l1", "--k", "-1", "--output", "x.tsv"],
    [],
])
def test_usage_errors_exit_1(workdir, graph_file, argv):
    assert main(argv) == 1


def test_data_errors_exit_2(workdir):
    assert main(["embed", "missing.txt", "--method", "l1", "--output", "x.tsv"]) == 2
    (workdir / "bad.txt").write_text("a b\nlonely\n", encoding="utf-8")
    assert main(["embed", "bad.txt", "--method", "l1", "--output", "x.tsv"]) == 2
    assert not (workdir / "x.tsv").exists()


# -- map and stats -----------------------------------------------------------------

def test_map_writes_sparse_features(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l1", "--output", "emb.tsv"]) == 0
    assert main(["map", "emb.tsv", "--output", "features.txt"]) == 0
    lines = read("features.txt").splitlines()
    assert lines[0].startswith("# dimension=5000\t")
    assert len(lines) == len(read("emb.tsv").splitlines())
    assert all(line.split(" ")[0] == "0" for line in lines[1:])
    assert (workdir / "features.txt.manifest").exists()


def test_map_rejects_bad_epsilon(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l0", "--output", "emb.tsv"]) == 0
    assert main(["map", "emb.tsv", "--epsilon", "0", "--output", "features.txt"]) == 1


def test_stats_reports_overlaps(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l0", "--output", "emb.tsv"]) == 0
    assert main(["stats", "emb.tsv", "--pairs", "10", "--output", "stats.tsv"]) == 0
    header = read("stats.tsv").splitlines()[0]
    assert header.startswith("# pairs=10\t")
    assert "mean_overlap=" in header


# -- check and oracle --------------------------------------------------------------

def test_check_passes_on_triangle(workdir, triangle_file):
    assert main(["check", triangle_file, "--method", "l0", "--k", "1", "--coordinates", "20000",
                 "--output", "report.tsv"]) == 0
    assert "failed=0" in read("report.tsv").splitlines()[0]


def test_check_fails_with_too_few_coordinates(workdir, p3_file):
    assert main(["check", p3_file, "--method", "l1", "--coordinates", "1"]) == 3


def test_check_respects_node_limit(workdir, triangle_file, monkeypatch):
    monkeypatch.setattr(TestingConfig, "ORACLE_NODE_LIMIT", 2)
    assert main(["check", triangle_file, "--method", "l0", "--coordinates", "20000"]) == 1
    assert main(["check", triangle_file, "--method", "l0", "--coordinates", "20000", "--force"]) == 0


def test_oracle_prints_exact_law(workdir, p3_file, capsys):
    assert main(["oracle", p3_file, "--node", "b", "--k", "2", "--method", "l1"]) == 0
    out = capsys.readouterr().out
    assert "0.285714" in out
    assert "0.428571" in out


def test_oracle_reports_both_sqrt_cosines(workdir, p3_file, capsys):
    assert main(["oracle", p3_file, "--pair", "a", "a", "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert "sqrt_cosine\tsqrt_cosine_bounded" in out
    assert "1.8" in out


def test_oracle_needs_a_query(workdir, p3_file):
    assert main(["oracle", p3_file]) == 1
    assert main(["oracle", p3_file, "--node", "zzz"]) == 2


# -- linkpred ----------------------------------------------------------------------

def test_linkpred_on_cycle(workdir):
    write_edges(workdir / "c10.txt", networkx_edges(nx.cycle_graph(10)))
    assert main(["linkpred", "c10.txt", "--holdout", "0.1", "--pair-fraction", "1", "--K", "5", "36",
                 "--output", "metrics.tsv"]) == 0
    lines = read("metrics.tsv").splitlines()
    assert lines[1].split("\t") == ["K", "hits", "precision", "recall"]
    assert lines[-1].split("\t")[:2] == ["36", "1"]


def test_linkpred_on_tree_is_a_data_error(workdir):
    write_edges(workdir / "tree.txt", networkx_edges(nx.balanced_tree(2, 3)))
    assert main(["linkpred", "tree.txt", "--holdout", "0.2", "--K", "5", "--output", "metrics.tsv"]) == 2


# -- replay ------------------------------------------------------------------------

def test_replay_reproduces_outputs(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l1", "--k", "2", "--output", "emb.tsv"]) == 0
    assert main(["replay", "emb.tsv.manifest"]) == 0


def test_replay_rejects_changed_inputs(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l1", "--output", "emb.tsv"]) == 0
    with open(graph_file, "a", encoding="utf-8") as handle:
        handle.write("n0 n39\n")
    assert main(["replay", "emb.tsv.manifest"]) == 2


def test_replay_detects_changed_outputs(workdir, graph_file):
    assert main(["embed", graph_file, "--method", "l1", "--output", "emb.tsv"]) == 0
    manifest = RunManifest.read("emb.tsv.manifest")
    manifest.outputs["embedding"].sha256 = "0" * 64
    manifest.write("emb.tsv.manifest")
    assert main(["replay", "emb.tsv.manifest"]) == 3
