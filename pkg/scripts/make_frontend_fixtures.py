#!/usr/bin/env python3
"""Generate the frontend test fixtures from the primary pipeline.

Writes a 100-record generation dataset (hidden edges of a 10x10 complete
bipartite graph) and the encoding golden strings the generator must agree
with byte-for-byte.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

from dkg.graph import DescriptiveGraph, Edge
from dkg.retrieval import encode_input, enumerate_paths, export_dataset

FIXTURES = Path(__file__).resolve().parents[1] / "frontend" / "test" / "fixtures"

VERBS = ["links", "guides", "powers", "shapes"]


def bipartite_graph() -> DescriptiveGraph:
    rng = random.Random(404)
    edges = []
    for i in range(10):
        for j in range(10):
            a, b = f"L{i:02d}", f"R{j:02d}"
            sentence = f"{a} {VERBS[(i + j) % len(VERBS)]} {b} today ."
            edges.append(Edge(a, b, sentence, round(rng.uniform(0.6, 0.99), 6), 0.9, f"doc-{a}-{b}", 0, a))
    return DescriptiveGraph.from_edges(edges)


def demo_graph() -> DescriptiveGraph:
    pairs = [
        ("x", "e11", "s11", 0.90), ("e11", "y", "s12", 0.80),
        ("x", "e21", "s21", 0.70), ("e21", "y", "s22", 0.95),
        ("e21", "e32", "s23", 0.60), ("e32", "y", "s33", 0.85),
        ("x", "e31", "s31", 0.75), ("e31", "e32", "s32", 0.65),
    ]
    return DescriptiveGraph.from_edges(Edge(a, b, s, rd, 0.9, f"doc-{a}-{b}", 0, a) for a, b, s, rd in pairs)


def main() -> None:
    dataset_dir = FIXTURES / "dataset"
    dataset_dir.mkdir(parents=True, exist_ok=True)
    sizes = export_dataset(bipartite_graph(), dataset_dir, m=2, min_paths=5, seed=1)
    assert sizes == (96, 2, 2), sizes

    g = demo_graph()
    paths = {p.entities: p for p in enumerate_paths(g, "x", "y", 3).paths}
    three_hop = paths[("x", "e31", "e32", "y")]
    golden = {
        "three_hop": encode_input("x", "y", [three_hop])[0],
        "pairs_only": encode_input("x", "y", [])[0],
        "one_hop": encode_input("x", "e11", enumerate_paths(g, "x", "e11", 1).paths)[0],
    }
    with open(FIXTURES / "encoded_golden.json", "w", encoding="utf-8") as fh:
        json.dump(golden, fh, indent=2)
        fh.write("\n")
    print(f"dataset sizes {sizes}; goldens: {list(golden)}")


if __name__ == "__main__":
    main()
