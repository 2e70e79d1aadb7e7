"""
`hopsampler linkpred`: hold out edges, embed the residual graph, rank candidate pairs by overlap
"""
import argparse
from typing import List

import pandas as pd
from structlog import get_logger

from config.config import Config
from ..errors import UsageError
from ..services.evalkit import make_linkpred_task, precision_recall_curve
from ..services.manifest import record_run
from ..services.sampler import build_embedding
from .common import (add_graph_arguments, add_sampler_arguments, load_attribute_table, load_graph,
                     sampler_config, workdir, write_frame)

logger = get_logger()


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("linkpred", help="link-prediction precision/recall at K")
    add_graph_arguments(parser)
    add_sampler_arguments(parser, config, default_method="l1", default_k=1)
    parser.add_argument("--holdout", type=float, default=config.LINKPRED_HOLDOUT, help="fraction of edges held out")
    parser.add_argument("--pair-fraction", type=float, default=config.LINKPRED_PAIR_FRACTION,
                        help="fraction of non-residual pairs ranked")
    parser.add_argument("--K", type=int, nargs="+", default=[config.LINKPRED_K], dest="cutoffs",
                        help="ranking cutoffs")
    parser.add_argument("--output", required=True, help="metrics TSV path")
    parser.set_defaults(handler=run_linkpred)


def run_linkpred(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    if args.directed:
        raise UsageError("link prediction runs on undirected graphs")
    if not 0 < args.holdout < 1 or not 0 < args.pair_fraction <= 1:
        raise UsageError("--holdout must be in (0, 1) and --pair-fraction in (0, 1]")
    g = load_graph(args)
    cfg = sampler_config(args, config)
    task = make_linkpred_task(g, args.holdout, args.pair_fraction, max(args.cutoffs), cfg.seed)
    attrs = load_attribute_table(args, task.residual.tokens)
    emb, _ = build_embedding(task.residual, cfg, attrs, workers=args.workers)

    metrics = precision_recall_curve(task, emb, args.cutoffs)
    frame = pd.DataFrame([{"K": m.cutoff, "hits": m.hits, "precision": m.precision, "recall": m.recall}
                          for m in metrics])
    meta = dict(emb.header)
    meta.update({"held_out": len(task.held_out), "candidates": len(task.candidates),
                 "baseline": f"{task.baseline:.6f}"})
    write_frame(args.output, frame, meta)

    record_run("linkpred", argv, workdir(), meta, inputs={"graph": args.graph, "nodes": args.nodes,
                                                           "attributes": args.attributes},
               outputs={"metrics": args.output}, seed=cfg.seed)
    for m in metrics:
        logger.info("Link prediction scored", K=m.cutoff, precision=m.precision, recall=m.recall)
    return 0
