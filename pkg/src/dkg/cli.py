"""Command-line surface: one subcommand per pipeline stage or query.

Exit codes: 0 success, 1 unexpected error, 2 missing input file, 3 malformed
config or input, 4 unknown entity, 5 empty result.
"""
from __future__ import annotations

import argparse
import sys

from dkg import pipeline
from dkg.config import ConfigError, PipelineConfig, load_config_file
from dkg.corpus import CorpusFormatError
from dkg.embeddings import EmbeddingFormatError
from dkg.graph import DescriptiveGraph, GraphFormatError
from dkg.patterns import PatternDbFormatError
from dkg.retrieval import encode_input, rank_and_retrieve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING_INPUT = 2
EXIT_BAD_INPUT = 3
EXIT_UNKNOWN_ENTITY = 4
EXIT_EMPTY_RESULT = 5

_OVERRIDE_KEYS = (
    "corpus",
    "embeddings",
    "out",
    "theta_build",
    "theta_rel",
    "theta_rd",
    "max_hops",
    "m",
    "min_paths",
    "seed",
    "workers",
)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (flat TOML-style key = value)")
    parser.add_argument("--corpus", help="parsed corpus JSONL file")
    parser.add_argument("--embeddings", help="entity embedding table (title TAB floats)")
    parser.add_argument("--out", help="pipeline output directory")
    parser.add_argument("--theta-build", type=float, help="relevance floor for pattern counting")
    parser.add_argument("--theta-rel", type=float, help="relevance floor for graph edges")
    parser.add_argument("--theta-rd", type=float, help="score floor for graph edges")
    parser.add_argument("--max-hops", type=int, help="longest reasoning path retrieved")
    parser.add_argument("--m", type=int, help="paths retrieved per entity pair")
    parser.add_argument("--min-paths", type=int, help="paths required to export a record")
    parser.add_argument("--seed", type=int, help="dataset shuffle seed")
    parser.add_argument("--workers", type=int, help="parallel worker bound")
    parser.add_argument("--modifying-deps", help="comma-separated modifying dependency labels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dkg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("ingest", "corpus -> filtered candidate descriptions"),
        ("build-patterns", "candidates -> core/sub pattern databases"),
        ("score", "candidates + databases -> scored candidates"),
        ("build-graph", "scored candidates -> graph directory"),
        ("stats", "graph -> node/edge counts and mean sentence length"),
        ("query", "graph -> relation description of an entity pair"),
        ("paths", "graph -> ranked reasoning paths of an entity pair"),
        ("export-dataset", "graph -> train/valid/test generation records"),
        ("encode", "graph -> encoded generator inputs for an entity pair"),
    ]
    for name, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
        if name in ("query", "paths", "encode"):
            p.add_argument("x", help="first entity title")
            p.add_argument("y", help="second entity title")
    return parser


def build_config(args: argparse.Namespace) -> PipelineConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    if getattr(args, "modifying_deps", None) is not None:
        values["modifying_deps"] = frozenset(
            label.strip() for label in args.modifying_deps.split(",") if label.strip()
        )
    return PipelineConfig(**values).validate()


def _require(cfg: PipelineConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"{name} is required (set --{name} or the config key)")


def _load_graph(cfg: PipelineConfig) -> DescriptiveGraph:
    _require(cfg, "out")
    return DescriptiveGraph.load(cfg.out_dir() / pipeline.GRAPH_DIR)


def run(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    command = args.command
    if command == "ingest":
        _require(cfg, "corpus", "embeddings", "out")
        stats = pipeline.run_ingest(cfg)
        print(f"ingest: {stats.get('candidates_accepted', 0)} candidates from {stats['documents']} documents")
        return EXIT_OK
    if command == "build-patterns":
        _require(cfg, "out")
        core_db, sub_db = pipeline.run_build_patterns(cfg)
        print(f"build-patterns: {len(core_db)} core patterns, {len(sub_db)} sub patterns")
        return EXIT_OK
    if command == "score":
        _require(cfg, "out")
        scored = pipeline.run_score(cfg)
        print(f"score: {len(scored)} candidates scored")
        return EXIT_OK
    if command == "build-graph":
        _require(cfg, "out")
        graph = pipeline.run_build_graph(cfg)
        print(f"build-graph: {graph.n_nodes()} nodes, {graph.n_edges()} edges")
        return EXIT_OK
    if command == "stats":
        nodes, edges, mean_len = _load_graph(cfg).stats()
        print(f"nodes: {nodes}")
        print(f"edges: {edges}")
        print(f"mean_sentence_tokens: {mean_len:.6f}")
        return EXIT_OK
    if command == "export-dataset":
        _require(cfg, "out")
        n_train, n_valid, n_test = pipeline.run_export_dataset(cfg)
        print(f"export-dataset: train={n_train} valid={n_valid} test={n_test}")
        return EXIT_OK

    graph = _load_graph(cfg)
    if args.x not in graph or args.y not in graph:
        missing = args.x if args.x not in graph else args.y
        print(f"unknown entity: {missing}", file=sys.stderr)
        return EXIT_UNKNOWN_ENTITY
    if command == "query":
        edge = graph.edge(args.x, args.y)
        if edge is None:
            print("no edge")
            return EXIT_EMPTY_RESULT
        print(f"rd: {edge.rd:.6f}")
        print(f"relevance: {edge.relevance:.6f}")
        print(f"subject: {edge.subject}")
        print(f"sentence: {edge.sentence}")
        return EXIT_OK
    if command == "paths":
        result = rank_and_retrieve(graph, args.x, args.y, cfg.m, cfg.max_hops)
        if not result.paths:
            print("no paths")
            return EXIT_EMPTY_RESULT
        for rank, path in enumerate(result.paths, start=1):
            print(f"path {rank}: hops={path.hops} score={path.score:.6f}")
            print(f"  entities: {'; '.join(path.entities)}")
            for i, sentence in enumerate(path.sentences, start=1):
                print(f"  sentence{i}: {sentence}")
        return EXIT_OK
    if command == "encode":
        result = rank_and_retrieve(graph, args.x, args.y, cfg.m, cfg.max_hops)
        for line in encode_input(args.x, args.y, result.paths):
            print(line)
        return EXIT_OK
    raise AssertionError(f"unhandled command {command!r}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except FileNotFoundError as exc:
        print(f"error: missing input file: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (ConfigError, CorpusFormatError, EmbeddingFormatError, PatternDbFormatError, GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
