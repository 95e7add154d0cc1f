"""Shared fixtures: the worked example sentence, the retrieval demo graph,
random generators, and paths to the bundled toy corpus."""
from __future__ import annotations

import json
import random
from pathlib import Path

from dkg.corpus import CandidateDescription, Document, Link, ParsedSentence
from dkg.deptree import DepTree, MentionSpan, Token, core_path, core_pattern, mention_head, normalize_subject_first
from dkg.graph import DescriptiveGraph, Edge

DATA_DIR = Path(__file__).parent / "data"
TOY_CORPUS = DATA_DIR / "toy_corpus.jsonl"
TOY_EMBEDDINGS = DATA_DIR / "toy_embeddings.tsv"
TOY_EXPECTED = json.loads((DATA_DIR / "toy_expected.json").read_text())

# "Machine learning explores the study and construction of algorithms that
# can learn from and make predictions on data."  Arcs follow the usual
# parser output for this sentence.
S1_ARCS = [
    ("Machine", 2, "compound"),
    ("learning", 3, "nsubj"),
    ("explores", 0, "ROOT"),
    ("the", 5, "det"),
    ("study", 3, "dobj"),
    ("and", 5, "cc"),
    ("construction", 5, "conj"),
    ("of", 5, "prep"),
    ("algorithms", 8, "pobj"),
    ("that", 12, "nsubj"),
    ("can", 12, "aux"),
    ("learn", 9, "relcl"),
    ("from", 12, "prep"),
    ("and", 12, "cc"),
    ("make", 12, "conj"),
    ("predictions", 15, "dobj"),
    ("on", 15, "prep"),
    ("data", 17, "pobj"),
    (".", 3, "punct"),
]


def s1_tokens() -> list[Token]:
    return [Token(i, text, head, deprel) for i, (text, head, deprel) in enumerate(S1_ARCS, start=1)]


def s1_tree() -> DepTree:
    return DepTree(s1_tokens())

S1_SPAN_ML = MentionSpan(1, 2, "Machine learning")
S1_SPAN_ALGO = MentionSpan(9, 9, "Algorithm")


def s1_candidate(relevance: float = 0.8) -> CandidateDescription:
    tree = s1_tree()
    path = core_path(tree, mention_head(tree, S1_SPAN_ML), mention_head(tree, S1_SPAN_ALGO))
    normalized = normalize_subject_first(path, core_pattern(path))
    return CandidateDescription(
        entity_a="Algorithm",
        entity_b="Machine learning",
        doc_id="doc-ml",
        sent_idx=0,
        sentence_text=" ".join(t.text for t in s1_tokens()),
        tokens=s1_tokens(),
        span_a=S1_SPAN_ALGO,
        span_b=S1_SPAN_ML,
        core_path=normalized.path,
        relevance=relevance,
    )


def demo_edge(a: str, b: str, sentence: str, rd: float) -> Edge:
    return Edge(a, b, sentence, rd, 0.9, f"doc-{a}-{b}", 0, a)


def retrieval_demo_graph() -> DescriptiveGraph:
    """Six entities, eight edges: exactly two 2-hop and two 3-hop x..y paths."""
    return DescriptiveGraph.from_edges(
        [
            demo_edge("x", "e11", "s11", 0.90),
            demo_edge("e11", "y", "s12", 0.80),
            demo_edge("x", "e21", "s21", 0.70),
            demo_edge("e21", "y", "s22", 0.95),
            demo_edge("e21", "e32", "s23", 0.60),
            demo_edge("e32", "y", "s33", 0.85),
            demo_edge("x", "e31", "s31", 0.75),
            demo_edge("e31", "e32", "s32", 0.65),
        ]
    )


LABELS = ["nsubj", "dobj", "prep", "pobj", "det", "amod", "conj", "appos",
          "compound", "advmod", "cc", "punct", "relcl", "aux", "attr", "dep"]


def random_tree(rng: random.Random, n: int) -> DepTree:
    tokens = [Token(1, "t1", 0, "ROOT")]
    for i in range(2, n + 1):
        tokens.append(Token(i, f"t{i}", rng.randint(1, i - 1), rng.choice(LABELS)))
    return DepTree(tokens)


def random_graph(rng: random.Random, max_nodes: int = 12, edge_prob: float = 0.4) -> DescriptiveGraph:
    n = rng.randint(2, max_nodes)
    names = [f"n{i:02d}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                rd = round(rng.uniform(0.6, 1.0), 6)
                edges.append(demo_edge(names[i], names[j], f"s-{names[i]}-{names[j]}", rd))
    if not edges:
        edges.append(demo_edge(names[0], names[1], "s-fallback", 0.75))
    return DescriptiveGraph.from_edges(edges)


def simple_sentence(doc_id: str, sent_idx: int, arcs: list[tuple[str, int, str]],
                    links: list[Link] | None = None) -> ParsedSentence:
    tokens = [Token(i, t, h, d) for i, (t, h, d) in enumerate(arcs, start=1)]
    return ParsedSentence(doc_id=doc_id, sent_idx=sent_idx, tokens=tokens, links=links or [])


def single_doc(doc_id: str, title: str, sentences: list[ParsedSentence]) -> Document:
    return Document(doc_id=doc_id, title=title, sentences=sentences)
