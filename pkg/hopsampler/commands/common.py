"""
Argument groups and input/output helpers shared by the subcommands
"""
import argparse
import csv
import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, TextIO, Tuple

import pandas as pd
from pydantic import ValidationError
from structlog import get_logger

from config.config import Config
from ..errors import DataError, UsageError
from ..models import FallbackPolicy, SamplerConfig, SamplingMethod
from ..services.evalkit import write_report
from ..services.graph_core import (AttributeTable, Graph, build_graph, load_attributes, load_edge_list,
                                   load_node_manifest)

logger = get_logger()


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that reports bad flags as UsageError instead of exiting"""

    def error(self, message: str):
        raise UsageError(message)


def add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("graph", help="edge-list file")
    parser.add_argument("--directed", action="store_true", help="treat edges as directed")
    parser.add_argument("--nodes", help="node manifest, one token per line (fixes dense ids)")
    parser.add_argument("--attributes", help="node<TAB>attributes file; enables attribute mode")


def add_sampler_arguments(parser: argparse.ArgumentParser, config: Config,
                          default_method: Optional[str] = None, default_k: int = 2) -> None:
    parser.add_argument("--method", choices=[m.value for m in SamplingMethod], default=default_method,
                        required=default_method is None)
    parser.add_argument("--k", type=int, default=default_k, help="neighborhood depth")
    parser.add_argument("--d", type=int, default=config.DIMENSIONS, help="embedding dimensions")
    parser.add_argument("--sketch", type=int, help="counter summary capacity (l1/l2)")
    parser.add_argument("--epsilon", type=float, help="norm sketch accuracy (l2)")
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.add_argument("--workers", type=int, default=config.WORKERS)
    parser.add_argument("--fallback", choices=[p.value for p in FallbackPolicy],
                        default=FallbackPolicy.HEAVIEST.value)


def sampler_config(args: argparse.Namespace, config: Config, dimensions: Optional[int] = None) -> SamplerConfig:
    method = SamplingMethod(args.method)
    if args.sketch is not None and not method.uses_sketch:
        raise UsageError(f"--sketch does not apply to method {method.value}")
    if args.epsilon is not None and method != SamplingMethod.L2:
        raise UsageError(f"--epsilon does not apply to method {method.value}")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    try:
        return SamplerConfig(
            method=method,
            depth=args.k,
            dimensions=dimensions if dimensions is not None else args.d,
            sketch_size=(args.sketch if args.sketch is not None else config.SKETCH_SIZE) if method.uses_sketch else None,
            norm_epsilon=args.epsilon if args.epsilon is not None else config.NORM_EPSILON,
            seed=args.seed,
            attribute_mode=getattr(args, "attributes", None) is not None,
            fallback_policy=FallbackPolicy(args.fallback),
            norm_sketch_depth=config.NORM_SKETCH_DEPTH,
            norm_sketch_width_factor=config.NORM_SKETCH_WIDTH_FACTOR,
            block_size=config.BLOCK_SIZE,
        )
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(map(str, err['loc'])) or 'config'}: {err['msg']}" for err in e.errors())
        raise UsageError(f"invalid sampler settings: {problems}") from None


@contextmanager
def open_input(path: str) -> Iterator[TextIO]:
    try:
        handle = open(path, encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None
    with handle:
        yield handle


@contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """File for writing, or stdout when no path is given"""
    if path is None:
        yield sys.stdout
        return
    try:
        handle = open(path, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise DataError(f"cannot write {path}: {e.strerror}") from None
    with handle:
        yield handle


def read_node_manifest(args: argparse.Namespace) -> Optional[List[str]]:
    if not args.nodes:
        return None
    with open_input(args.nodes) as handle:
        return load_node_manifest(handle)


def load_graph(args: argparse.Namespace) -> Graph:
    manifest = read_node_manifest(args)
    with open_input(args.graph) as handle:
        return load_edge_list(handle, directed=args.directed, manifest=manifest)


def load_attribute_table(args: argparse.Namespace, node_tokens) -> Optional[AttributeTable]:
    if not args.attributes:
        return None
    # attribute lines are matched by token, so an edgeless graph over the tokens suffices
    index = build_graph([], manifest=list(node_tokens))
    with open_input(args.attributes) as handle:
        return load_attributes(handle, index)


def read_labels(path: str, node_tokens) -> List[int]:
    """node<TAB>label per line; nodes without a line get class 0"""
    try:
        frame = pd.read_csv(path, sep="\t", header=None, names=["node", "label"], dtype=str, comment="#",
                            quoting=csv.QUOTE_NONE, keep_default_na=False)
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None
    except pd.errors.EmptyDataError:
        return [0] * len(node_tokens)
    except pd.errors.ParserError as e:
        raise DataError(f"malformed label file {path}: {e}") from None

    labels: Dict[str, int] = {}
    for node, label in zip(frame["node"], frame["label"]):
        try:
            labels[node] = int(label)
        except ValueError:
            raise DataError(f"label for node {node} is not an integer: {label!r}") from None
    return [labels.get(token, 0) for token in node_tokens]


def write_frame(path: Optional[str], frame: pd.DataFrame, meta: Optional[Dict[str, object]] = None) -> None:
    with open_output(path) as handle:
        if meta is None:
            frame.to_csv(handle, sep="\t", index=False, float_format="%.6f", lineterminator="\n")
        else:
            write_report(handle, frame, meta)


def sidecar(path: str, suffix: str) -> str:
    return str(Path(path).with_name(Path(path).name + suffix))


def workdir() -> str:
    return os.getcwd()


def check_node_limit(node_count: int, limit: int, force: bool) -> None:
    if node_count > limit and not force:
        raise UsageError(f"graph has {node_count} nodes, above the oracle limit of {limit}; pass --force")


def resolve_nodes(g: Graph, tokens: Optional[List[str]]) -> List[int]:
    return [g.node_id(token) for token in tokens or []]


def resolve_pairs(g: Graph, pairs: Optional[List[List[str]]]) -> List[Tuple[int, int]]:
    return [(g.node_id(a), g.node_id(b)) for a, b in pairs or []]
