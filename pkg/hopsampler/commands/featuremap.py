"""
`hopsampler map`: explicit binary feature map of an embedding, in sparse text format
"""
import argparse
from typing import List

from structlog import get_logger

from config.config import Config
from ..errors import UsageError
from ..services.featuremap import explicit_map_rows, export_sparse, feature_dimension
from ..services.hashing import TabulationHasher
from ..services.manifest import record_run
from ..services.sampler import EmbeddingMatrix
from .common import open_input, open_output, read_labels, workdir

logger = get_logger()

# bucket ids are written as decimal int32 by common sparse-format readers
MAX_FEATURE_DIMENSION = 2 ** 31 - 1


def register(subparsers, config: Config) -> None:
    parser = subparsers.add_parser("map", help="explicit feature map of an embedding")
    parser.add_argument("embedding", help="embedding TSV written by `embed`")
    parser.add_argument("--epsilon", type=float, default=config.MAP_EPSILON, help="collision budget; D = ceil(d/eps)")
    parser.add_argument("--seed", type=int, default=config.SEED, help="tabulation hash seed")
    parser.add_argument("--labels", help="node<TAB>label file")
    parser.add_argument("--output", required=True)
    parser.set_defaults(handler=run_map)


def run_map(args: argparse.Namespace, config: Config, argv: List[str]) -> int:
    if not 0 < args.epsilon <= 1:
        raise UsageError("--epsilon must be in (0, 1]")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    with open_input(args.embedding) as handle:
        emb = EmbeddingMatrix.from_tsv(handle)

    dimension = feature_dimension(emb.dimensions, args.epsilon)
    if dimension > MAX_FEATURE_DIMENSION or emb.dimensions * max(len(emb.universe), 1) >= 2 ** 63:
        raise UsageError(f"feature dimension {dimension} too large; raise --epsilon")

    maps = explicit_map_rows(emb, args.epsilon, TabulationHasher(args.seed))
    labels = read_labels(args.labels, emb.node_tokens) if args.labels else None
    with open_output(args.output) as handle:
        handle.write(f"# dimension={dimension}\tepsilon={args.epsilon}\tseed={args.seed}\td={emb.dimensions}\n")
        handle.write(export_sparse(maps, labels))

    record_run("map", argv, workdir(), {"dimension": dimension, "epsilon": args.epsilon},
               inputs={"embedding": args.embedding, "labels": args.labels},
               outputs={"features": args.output}, seed=args.seed)
    logger.info("Feature map written", path=args.output, dimension=dimension, nodes=len(maps))
    return 0
