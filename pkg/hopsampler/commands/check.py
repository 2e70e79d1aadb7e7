"""
`hopsampler check`: sample many coordinates and compare against the exact oracles
"""
import argparse
import math
from typing import List

from structlog import get_logger

from config.config import Config
from ..errors import CheckFailure, UsageError
from ..models import SamplingMethod
from ..services.evalkit import checks_frame, collision_checks, distribution_checks, sample_pairs
from ..services.manifest import record_run
from ..services.sampler import build_embedding
from .common import (add_graph_arguments, add_sampler_arguments, check_node_limit, load_attribute_table,
                     load_graph, resolve_nodes, sampler_config, workdir, write_frame)

logger = get_logger()

DEFAULT_CHECKED_NODES = 50


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("check", help="statistical checks against exact oracles")
    add_graph_arguments(parser)
    add_sampler_arguments(parser, config)
    parser.add_argument("--coordinates", type=int, default=config.CHECK_COORDINATES,
                        help="coordinates to sample")
    parser.add_argument("--pairs", type=int, default=config.CHECK_PAIRS, help="node pairs for collision checks")
    parser.add_argument("--node", action="append", help="node to check (repeatable); default: a sample")
    parser.add_argument("--force", action="store_true", help="allow graphs above the oracle node limit")
    parser.add_argument("--output", help="report path (default stdout)")
    parser.set_defaults(handler=run_check)


def run_check(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    """Exit 0 when every measured deviation is within tolerance, 3 otherwise"""
    g = load_graph(args)
    check_node_limit(g.node_count, config.ORACLE_NODE_LIMIT, args.force)
    if args.coordinates < 1 or args.pairs < 0:
        raise UsageError("--coordinates must be positive and --pairs non-negative")
    cfg = sampler_config(args, config, dimensions=args.coordinates)
    if cfg.attribute_mode and cfg.method == SamplingMethod.RW:
        raise UsageError("random-walk checks are defined over nodes only")
    attrs = load_attribute_table(args, g.tokens)

    nodes = resolve_nodes(g, args.node) or list(range(min(g.node_count, DEFAULT_CHECKED_NODES)))
    total_pairs = g.node_count * (g.node_count - 1) // 2
    pair_count = min(args.pairs, total_pairs)
    pairs = []
    if pair_count:
        first, second = sample_pairs(g.node_count, pair_count, cfg.seed)
        pairs = list(zip(first.tolist(), second.tolist()))

    emb, _ = build_embedding(g, cfg, attrs, workers=args.workers)
    results = distribution_checks(g, emb, cfg.method, cfg.depth, nodes, attrs)
    results += collision_checks(g, emb, cfg.method, cfg.depth, pairs, attrs)

    failed = [r for r in results if not r.passed]
    meta = {"method": cfg.method.value, "k": cfg.depth, "coordinates": cfg.dimensions, "seed": cfg.seed,
            "checks": len(results), "failed": len(failed)}
    write_frame(args.output, checks_frame(results), meta)
    if args.output:
        record_run("check", argv, workdir(), meta, inputs={"graph": args.graph, "nodes": args.nodes,
                                                            "attributes": args.attributes},
                   outputs={"report": args.output}, seed=cfg.seed)

    logger.info("Checks finished", checks=len(results), failed=len(failed))
    if failed:
        worst = max(failed, key=lambda r: math.inf if math.isnan(r.measured) else abs(r.measured - r.expected))
        raise CheckFailure(f"{len(failed)} of {len(results)} checks outside tolerance "
                           f"(worst: {worst.check} {worst.subject} measured {worst.measured:.4f}, "
                           f"expected {worst.expected:.4f} ± {worst.tolerance})")
    return 0
