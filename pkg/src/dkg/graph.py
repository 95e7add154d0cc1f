"""Undirected descriptive graph: entities linked by their best relation description.

Each entity pair keeps a single sentence, the highest-scoring candidate that
clears both the relevance and the score thresholds.  Pairs are stored under
the lexicographically ordered key, so lookups are direction-free.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from dkg.scoring import ScoredCandidate

__all__ = [
    "Edge",
    "DescriptiveGraph",
    "GraphFormatError",
    "select_best",
    "build",
    "DEFAULT_RELEVANCE_THRESHOLD",
    "DEFAULT_RD_THRESHOLD",
]

DEFAULT_RELEVANCE_THRESHOLD = 0.5
DEFAULT_RD_THRESHOLD = 0.6

NODES_FILE = "nodes.tsv"
EDGES_FILE = "edges.tsv"


class GraphFormatError(ValueError):
    """Raised when a stored graph directory cannot be read back."""


@dataclass(frozen=True)
class Edge:
    """One relation description fact between two entities."""

    entity_a: str
    entity_b: str
    sentence: str
    rd: float
    relevance: float
    doc_id: str
    sent_idx: int
    subject: str

    def other(self, entity: str) -> str:
        return self.entity_b if entity == self.entity_a else self.entity_a


def canonical_pair(x: str, y: str) -> tuple[str, str]:
    return (x, y) if x <= y else (y, x)


class DescriptiveGraph:
    """Immutable-after-build undirected graph keyed by canonical entity pairs."""

    def __init__(self) -> None:
        self.edges: dict[tuple[str, str], Edge] = {}
        self._adjacency: dict[str, list[str]] = {}

    def add_edge(self, edge: Edge) -> None:
        key = canonical_pair(edge.entity_a, edge.entity_b)
        if key != (edge.entity_a, edge.entity_b):
            edge = replace(edge, entity_a=key[0], entity_b=key[1])
        self.edges[key] = edge
        self._adjacency.setdefault(key[0], [])
        self._adjacency.setdefault(key[1], [])

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> "DescriptiveGraph":
        graph = cls()
        for edge in edges:
            graph.add_edge(edge)
        graph._rebuild_adjacency()
        return graph

    def _rebuild_adjacency(self) -> None:
        for neighbours in self._adjacency.values():
            neighbours.clear()
        for a, b in self.edges:
            self._adjacency[a].append(b)
            self._adjacency[b].append(a)
        for neighbours in self._adjacency.values():
            neighbours.sort()

    @property
    def nodes(self) -> set[str]:
        return set(self._adjacency)

    def __contains__(self, entity: str) -> bool:
        return entity in self._adjacency

    def n_nodes(self) -> int:
        return len(self._adjacency)

    def n_edges(self) -> int:
        return len(self.edges)

    def edge(self, x: str, y: str) -> Edge | None:
        return self.edges.get(canonical_pair(x, y))

    def neighbors(self, x: str) -> list[tuple[str, Edge]]:
        """Adjacent entities in lexicographic order with their edges."""
        out = []
        for other in self._adjacency.get(x, []):
            edge = self.edges[canonical_pair(x, other)]
            out.append((other, edge))
        return out

    def stats(self) -> tuple[int, int, float]:
        """(node count, edge count, mean sentence token length)."""
        if not self.edges:
            return (self.n_nodes(), 0, 0.0)
        total = sum(len(e.sentence.split(" ")) for e in self.edges.values())
        return (self.n_nodes(), len(self.edges), total / len(self.edges))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DescriptiveGraph) and self.edges == other.edges and self.nodes == other.nodes

    def save(self, directory: str | Path) -> None:
        """Write nodes.tsv and edges.tsv, both sorted for byte-stable output.

        Scores are stored at six decimal places, the precision the scoring
        stage emits.
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for field_name, values in (
            ("entity", self._adjacency),
            ("sentence", [e.sentence for e in self.edges.values()]),
            ("doc_id", [e.doc_id for e in self.edges.values()]),
        ):
            for value in values:
                if "\t" in value or "\n" in value:
                    raise GraphFormatError(f"{field_name} value {value!r} contains a tab or newline")
        with open(directory / NODES_FILE, "w", encoding="utf-8") as fh:
            for node in sorted(self._adjacency):
                fh.write(node + "\n")
        with open(directory / EDGES_FILE, "w", encoding="utf-8") as fh:
            for key in sorted(self.edges):
                e = self.edges[key]
                fh.write(
                    f"{e.entity_a}\t{e.entity_b}\t{e.rd:.6f}\t{e.relevance:.6f}"
                    f"\t{e.doc_id}\t{e.sent_idx}\t{e.subject}\t{e.sentence}\n"
                )

    @classmethod
    def load(cls, directory: str | Path) -> "DescriptiveGraph":
        directory = Path(directory)
        graph = cls()
        nodes_path = directory / NODES_FILE
        edges_path = directory / EDGES_FILE
        with open(nodes_path, encoding="utf-8") as fh:
            for line in fh:
                node = line.rstrip("\n")
                if node:
                    graph._adjacency.setdefault(node, [])
        with open(edges_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 8:
                    raise GraphFormatError(f"{edges_path}:{lineno}: expected 8 columns, got {len(parts)}")
                a, b, rd_text, rel_text, doc_id, sent_idx_text, subject, sentence = parts
                try:
                    edge = Edge(a, b, sentence, float(rd_text), float(rel_text), doc_id, int(sent_idx_text), subject)
                except ValueError as exc:
                    raise GraphFormatError(f"{edges_path}:{lineno}: {exc}") from exc
                for endpoint in (a, b):
                    if endpoint not in graph._adjacency:
                        raise GraphFormatError(
                            f"{edges_path}:{lineno}: endpoint {endpoint!r} missing from {NODES_FILE}"
                        )
                graph.edges[(a, b)] = edge
        graph._rebuild_adjacency()
        return graph


def select_best(group: Sequence[ScoredCandidate]) -> ScoredCandidate:
    """Highest-scoring candidate of one pair; ties go to document order."""
    if not group:
        raise ValueError("empty candidate group")
    return min(group, key=lambda sc: (-sc.rd, sc.candidate.doc_id, sc.candidate.sent_idx))


def build(
    best: Iterable[ScoredCandidate],
    theta_rel: float = DEFAULT_RELEVANCE_THRESHOLD,
    theta_rd: float = DEFAULT_RD_THRESHOLD,
) -> DescriptiveGraph:
    """Graph of exactly the pairs whose best candidate clears both thresholds."""
    graph = DescriptiveGraph()
    for sc in best:
        c = sc.candidate
        if c.relevance < theta_rel or sc.rd < theta_rd:
            continue
        graph.add_edge(
            Edge(
                entity_a=c.entity_a,
                entity_b=c.entity_b,
                sentence=c.sentence_text,
                rd=sc.rd,
                relevance=c.relevance,
                doc_id=c.doc_id,
                sent_idx=c.sent_idx,
                subject=c.subject_entity(),
            )
        )
    graph._rebuild_adjacency()
    return graph
