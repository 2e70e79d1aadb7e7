"""
`hopsampler stats`: average pairwise overlap and explicit-map approximation quality of an embedding
"""
import argparse
from typing import List

import numpy as np
import pandas as pd
from structlog import get_logger

from config.config import Config
from ..errors import UsageError
from ..services.evalkit import average_overlap, kernel_approximation
from ..services.manifest import record_run
from ..services.sampler import EmbeddingMatrix
from .common import open_input, workdir, write_frame

logger = get_logger()


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("stats", help="overlap statistics of an embedding")
    parser.add_argument("embedding", help="embedding TSV written by `embed`")
    parser.add_argument("--pairs", type=int, default=config.OVERLAP_PAIRS, help="node pairs to sample")
    parser.add_argument("--epsilon", type=float, default=config.MAP_EPSILON, help="feature map collision budget")
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.add_argument("--output", help="report path (default stdout)")
    parser.set_defaults(handler=run_stats)


def run_stats(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    if args.pairs < 1 or not 0 < args.epsilon <= 1 or args.seed < 0:
        raise UsageError("--pairs must be positive, --epsilon in (0, 1], --seed non-negative")
    with open_input(args.embedding) as handle:
        emb = EmbeddingMatrix.from_tsv(handle)
    if emb.node_count < 2:
        raise UsageError("overlap statistics need at least two nodes")

    available = emb.node_count * (emb.node_count - 1) // 2
    pairs = min(args.pairs, available)
    if pairs < args.pairs:
        logger.warning("Fewer node pairs than requested", requested=args.pairs, available=available)

    overlap = average_overlap(emb, pairs, args.seed)
    report = kernel_approximation(emb, args.epsilon, args.seed, pairs)
    tokens = np.asarray(emb.node_tokens, dtype=object)
    frame = pd.DataFrame({"u": tokens[report.first], "v": tokens[report.second],
                          "overlap": report.exact, "map_inner_product": report.approximate})
    meta = {"pairs": pairs, "d": emb.dimensions, "mean_overlap": f"{overlap.mean:.6f}",
            "median_overlap": f"{overlap.median:.6f}", "dimension": report.dimension,
            "mean_abs_error": f"{report.mean_abs_error:.6f}", "exact_fraction": f"{report.exact_fraction:.6f}"}
    write_frame(args.output, frame, meta)
    if args.output:
        record_run("stats", argv, workdir(), meta, inputs={"embedding": args.embedding},
                   outputs={"report": args.output}, seed=args.seed)
    logger.info("Overlap statistics", **meta)
    return 0
