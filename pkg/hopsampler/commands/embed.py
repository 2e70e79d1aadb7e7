"""
`hopsampler embed`: sample a d-dimensional discrete embedding of every node
"""
import argparse
from typing import List

from structlog import get_logger

from config.config import Config
from ..services.graph_core import EdgeStream, reject_repeated_edges, scan_node_tokens
from ..services.manifest import record_run
from ..services.sampler import build_embedding
from ..services.streaming import streaming_pass_driver
from .common import (add_graph_arguments, add_sampler_arguments, load_attribute_table, load_graph, open_input,
                     open_output, read_node_manifest, sampler_config, sidecar, workdir, write_frame)

logger = get_logger()

DIAGNOSTICS_SUFFIX = ".diag.tsv"
THRESHOLDS_SUFFIX = ".thresholds.tsv"


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("embed", help="build a node embedding")
    add_graph_arguments(parser)
    add_sampler_arguments(parser, config)
    parser.add_argument("--streaming", action="store_true", help="k passes over the edge file")
    parser.add_argument("--output", required=True, help="embedding TSV path")
    parser.set_defaults(handler=run_embed)


def run_embed(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    """Write the embedding, its diagnostics sidecars and the run manifest"""
    if args.streaming:
        node_tokens = read_node_manifest(args)
        if node_tokens is None:
            with open_input(args.graph) as handle:
                node_tokens = scan_node_tokens(handle)
        with open_input(args.graph) as handle:
            reject_repeated_edges(handle, node_tokens, directed=args.directed)
        cfg = sampler_config(args, config)
        attrs = load_attribute_table(args, node_tokens)
        stream = EdgeStream.from_file(args.graph, node_tokens, directed=args.directed)
        emb, diagnostics = streaming_pass_driver(stream, cfg, attrs)
    else:
        g = load_graph(args)
        cfg = sampler_config(args, config)
        attrs = load_attribute_table(args, g.tokens)
        emb, diagnostics = build_embedding(g, cfg, attrs, workers=args.workers)

    with open_output(args.output) as handle:
        emb.to_tsv(handle)
    diag_path = sidecar(args.output, DIAGNOSTICS_SUFFIX)
    thresholds_path = sidecar(args.output, THRESHOLDS_SUFFIX)
    write_frame(diag_path, diagnostics.to_frame())
    write_frame(thresholds_path, diagnostics.thresholds_frame(emb.node_tokens))

    record_run("embed", argv, workdir(), emb.header,
               inputs={"graph": args.graph, "nodes": args.nodes, "attributes": args.attributes},
               outputs={"embedding": args.output, "diagnostics": diag_path, "thresholds": thresholds_path},
               seed=cfg.seed)
    logger.info("Embedding written", path=args.output, nodes=emb.node_count, d=emb.dimensions,
                **diagnostics.totals())
    return 0
