"""
`hopsampler oracle`: exact sampling laws and neighborhood similarities, computed by brute force
"""
import argparse
import math
from typing import List

import pandas as pd

from config.config import Config
from ..errors import UsageError
from ..models import SamplingMethod
from ..services.evalkit import write_report
from ..services.manifest import record_run
from ..services.oracle import (bounded_sqrt_cosine, cosine_and_sqrtcos, exact_sampling_distribution, jaccard,
                               minsum_similarity)
from .common import (add_graph_arguments, check_node_limit, load_attribute_table, load_graph, open_output,
                     resolve_nodes, resolve_pairs, workdir)


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("oracle", help="exact distributions and similarities")
    add_graph_arguments(parser)
    parser.add_argument("--method", choices=[m.value for m in SamplingMethod], default=SamplingMethod.L1.value)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--node", action="append", help="print the exact sampling law of this node")
    parser.add_argument("--pair", nargs=2, action="append", metavar=("U", "V"),
                        help="print similarities of this node pair")
    parser.add_argument("--force", action="store_true", help="allow graphs above the oracle node limit")
    parser.add_argument("--output", help="report path (default stdout)")
    parser.set_defaults(handler=run_oracle)


def run_oracle(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    if not args.node and not args.pair:
        raise UsageError("give at least one --node or --pair")
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    method = SamplingMethod(args.method)
    g = load_graph(args)
    check_node_limit(g.node_count, config.ORACLE_NODE_LIMIT, args.force)
    attrs = load_attribute_table(args, g.tokens)
    if attrs is not None and method == SamplingMethod.RW:
        raise UsageError("random-walk laws are defined over nodes only")
    universe = g.tokens if attrs is None else attrs.attribute_tokens

    with open_output(args.output) as handle:
        nodes = resolve_nodes(g, args.node)
        if nodes:
            rows = [{"node": g.token(u), "token": universe[z], "probability": p}
                    for u in nodes
                    for z, p in sorted(exact_sampling_distribution(g, u, args.k, method, attrs).items())]
            write_report(handle, pd.DataFrame(rows, columns=["node", "token", "probability"]),
                         {"table": "distribution", "method": method.value, "k": args.k})

        pairs = resolve_pairs(g, args.pair)
        if pairs:
            rows = []
            for u, v in pairs:
                if attrs is None:
                    cosine, sqrt_cosine = cosine_and_sqrtcos(g, u, v, args.k)
                    bounded = bounded_sqrt_cosine(g, u, v, args.k)
                else:
                    cosine = sqrt_cosine = bounded = math.nan
                rows.append({"u": g.token(u), "v": g.token(v), "jaccard": jaccard(g, u, v, args.k),
                             "minsum_l1": minsum_similarity(g, u, v, args.k, 1, attrs),
                             "minsum_l2": minsum_similarity(g, u, v, args.k, 2, attrs),
                             "cosine": cosine, "sqrt_cosine": sqrt_cosine, "sqrt_cosine_bounded": bounded})
            write_report(handle, pd.DataFrame(rows), {"table": "similarity", "k": args.k})
    if args.output:
        record_run("oracle", argv, workdir(), {"method": method.value, "k": args.k},
                   inputs={"graph": args.graph, "nodes": args.nodes, "attributes": args.attributes},
                   outputs={"report": args.output})
    return 0
