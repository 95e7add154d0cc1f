"""Reasoning-path retrieval and generation-dataset export.

A reasoning path is a simple path between two entities; its score is the
harmonic mean of the edge scores along it.  Retrieval ranks by length first
(shorter is easier to reason over), then by score.  The exporter hides each
edge in turn, retrieves the surviving paths for its endpoints, and encodes
them into input strings for a downstream generator.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from dkg.graph import DescriptiveGraph

__all__ = [
    "ReasoningPath",
    "PathQuery",
    "GenerationRecord",
    "enumerate_paths",
    "path_score",
    "rank_and_retrieve",
    "encode_input",
    "export_dataset",
    "DEFAULT_MAX_HOPS",
    "DEFAULT_MIN_PATHS",
    "DEFAULT_SPLIT",
]

DEFAULT_MAX_HOPS = 3
DEFAULT_MIN_PATHS = 5
DEFAULT_SPLIT = (0.96, 0.02, 0.02)


@dataclass(frozen=True)
class ReasoningPath:
    """Alternating entity/sentence sequence connecting two entities."""

    entities: tuple[str, ...]
    sentences: tuple[str, ...]
    score: float

    @property
    def hops(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class PathQuery:
    """Enumeration result: ``status`` is "ok" or "unknown_entity"."""

    status: str
    paths: tuple[ReasoningPath, ...]

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def path_score(edge_scores: Iterable[float]) -> float:
    """Harmonic mean of the edge scores along one path."""
    scores = list(edge_scores)
    if len(scores) == 1:  # keep single-edge paths bit-exact with the edge
        return scores[0]
    return len(scores) / sum(1.0 / s for s in scores)


def _walk(
    g: DescriptiveGraph,
    current: str,
    target: str,
    remaining: int,
    entities: list[str],
    sentences: list[str],
    rds: list[float],
    exclude_direct: bool,
    out: list[ReasoningPath],
) -> None:
    for neighbour, edge in g.neighbors(current):
        if neighbour == target:
            if exclude_direct and len(entities) == 1:
                continue
            out.append(
                ReasoningPath(
                    entities=tuple(entities) + (target,),
                    sentences=tuple(sentences) + (edge.sentence,),
                    score=path_score(rds + [edge.rd]),
                )
            )
            continue
        if remaining == 1 or neighbour in entities:
            continue
        entities.append(neighbour)
        sentences.append(edge.sentence)
        rds.append(edge.rd)
        _walk(g, neighbour, target, remaining - 1, entities, sentences, rds, exclude_direct, out)
        entities.pop()
        sentences.pop()
        rds.pop()


def enumerate_paths(
    g: DescriptiveGraph,
    x: str,
    y: str,
    max_hops: int = DEFAULT_MAX_HOPS,
    exclude_direct: bool = False,
) -> PathQuery:
    """All simple paths from x to y with at most ``max_hops`` edges.

    Unknown endpoints yield an empty result with status ``unknown_entity``
    rather than an error.
    """
    if max_hops < 1:
        raise ValueError(f"max_hops must be >= 1, got {max_hops}")
    if x not in g or y not in g:
        return PathQuery("unknown_entity", ())
    if x == y:
        return PathQuery("ok", ())
    out: list[ReasoningPath] = []
    _walk(g, x, y, max_hops, [x], [], [], exclude_direct, out)
    return PathQuery("ok", tuple(out))


def rank_and_retrieve(
    g: DescriptiveGraph,
    x: str,
    y: str,
    m: int,
    max_hops: int = DEFAULT_MAX_HOPS,
    exclude_direct: bool = False,
) -> PathQuery:
    """Top-m paths ordered by (hops, -score, intermediate entity sequence)."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    query = enumerate_paths(g, x, y, max_hops, exclude_direct)
    if not query.ok:
        return query
    ranked = sorted(query.paths, key=lambda p: (p.hops, -p.score, p.entities[1:-1]))
    return PathQuery("ok", tuple(ranked[:m]))


def encode_input(x: str, y: str, paths: Iterable[ReasoningPath]) -> list[str]:
    """One input string per path; with no paths, the bare entity-pair string."""
    header = f"entity1: {x} entity2: {y}"
    encoded = []
    for path in paths:
        route = "; ".join(path.entities)
        sentences = " ".join(
            f"sentence{i}: {s}" for i, s in enumerate(path.sentences, start=1)
        )
        encoded.append(f"{header} path: {route} {sentences}")
    return encoded if encoded else [header]


@dataclass(frozen=True)
class GenerationRecord:
    """One training example: a hidden edge and the paths that survive it."""

    x: str
    y: str
    target: str
    inputs: tuple[str, ...]

    def to_json(self) -> str:
        return json.dumps(
            {"x": self.x, "y": self.y, "target": self.target, "inputs": list(self.inputs)},
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "GenerationRecord":
        obj = json.loads(line)
        return cls(obj["x"], obj["y"], obj["target"], tuple(obj["inputs"]))


def build_records(
    g: DescriptiveGraph,
    m: int,
    min_paths: int = DEFAULT_MIN_PATHS,
    max_hops: int = DEFAULT_MAX_HOPS,
    keys: Iterable[tuple[str, str]] | None = None,
) -> Iterator[GenerationRecord]:
    """One record per edge with enough alternative paths, in pair order.

    The edge's own sentence is the target; its paths are retrieved with the
    direct edge excluded, so no input can leak the target.  ``keys`` limits
    the sweep to a subset of edges (used for per-chunk parallel export).
    """
    for key in sorted(g.edges) if keys is None else keys:
        edge = g.edges[key]
        available = enumerate_paths(g, edge.entity_a, edge.entity_b, max_hops, exclude_direct=True)
        if len(available.paths) < min_paths:
            continue
        ranked = sorted(available.paths, key=lambda p: (p.hops, -p.score, p.entities[1:-1]))
        inputs = encode_input(edge.entity_a, edge.entity_b, ranked[:m])
        yield GenerationRecord(edge.entity_a, edge.entity_b, edge.sentence, tuple(inputs))


def split_sizes(n: int, split: tuple[float, float, float] = DEFAULT_SPLIT) -> tuple[int, int, int]:
    n_valid = round(n * split[1])
    n_test = round(n * split[2])
    return (n - n_valid - n_test, n_valid, n_test)


def export_dataset(
    g: DescriptiveGraph,
    out_dir: str | Path,
    m: int,
    min_paths: int = DEFAULT_MIN_PATHS,
    max_hops: int = DEFAULT_MAX_HOPS,
    split: tuple[float, float, float] = DEFAULT_SPLIT,
    seed: int = 0,
) -> tuple[int, int, int]:
    """Shuffle records by ``seed``, split, and write train/valid/test.jsonl."""
    records = list(build_records(g, m, min_paths, max_hops))
    rng = random.Random(seed)
    rng.shuffle(records)
    n_train, n_valid, n_test = split_sizes(len(records), split)
    parts = {
        "train.jsonl": records[:n_train],
        "valid.jsonl": records[n_train : n_train + n_valid],
        "test.jsonl": records[n_train + n_valid :],
    }
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in parts.items():
        with open(out_dir / name, "w", encoding="utf-8") as fh:
            for record in part:
                fh.write(record.to_json() + "\n")
    return (n_train, n_valid, n_test)
