"""Path enumeration against an exhaustive oracle, ranking, encoding, export."""
from __future__ import annotations

import json
import random

import networkx as nx
import pytest

from dkg.graph import DescriptiveGraph
from dkg.retrieval import (
    GenerationRecord,
    ReasoningPath,
    build_records,
    encode_input,
    enumerate_paths,
    export_dataset,
    path_score,
    rank_and_retrieve,
    split_sizes,
)
from fixtures import demo_edge, random_graph, retrieval_demo_graph


def to_networkx(g: DescriptiveGraph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.nodes)
    nxg.add_edges_from(g.edges)
    return nxg


def oracle_paths(g: DescriptiveGraph, x: str, y: str, max_hops: int, exclude_direct: bool) -> set[tuple[str, ...]]:
    found = {
        tuple(p) for p in nx.all_simple_paths(to_networkx(g), x, y, cutoff=max_hops)
    }
    if exclude_direct:
        found = {p for p in found if len(p) > 2}
    return found


class TestEnumeratePaths:
    def test_demo_graph_has_two_2hop_and_two_3hop_paths(self):
        g = retrieval_demo_graph()
        result = enumerate_paths(g, "x", "y", max_hops=3)
        assert result.ok
        routes = {p.entities for p in result.paths}
        assert routes == {
            ("x", "e11", "y"),
            ("x", "e21", "y"),
            ("x", "e21", "e32", "y"),
            ("x", "e31", "e32", "y"),
        }
        by_route = {p.entities: p for p in result.paths}
        assert by_route[("x", "e11", "y")].sentences == ("s11", "s12")
        assert by_route[("x", "e31", "e32", "y")].sentences == ("s31", "s32", "s33")
        assert sum(p.hops == 2 for p in result.paths) == 2
        assert sum(p.hops == 3 for p in result.paths) == 2

    def test_direct_edge_only(self):
        g = retrieval_demo_graph()
        result = enumerate_paths(g, "x", "e11", max_hops=1)
        assert [p.entities for p in result.paths] == [("x", "e11")]
        assert result.paths[0].score == 0.90

    def test_exclude_direct_removes_only_the_one_hop_path(self):
        g = retrieval_demo_graph()
        with_direct = enumerate_paths(g, "x", "e11", max_hops=3)
        without = enumerate_paths(g, "x", "e11", max_hops=3, exclude_direct=True)
        assert {p.entities for p in with_direct.paths} - {p.entities for p in without.paths} == {("x", "e11")}

    def test_unknown_entity_status(self):
        g = retrieval_demo_graph()
        result = enumerate_paths(g, "x", "nowhere")
        assert result.status == "unknown_entity"
        assert result.paths == ()

    def test_matches_exhaustive_oracle_on_random_graphs(self):
        rng = random.Random(23)
        for _ in range(200):
            g = random_graph(rng)
            nodes = sorted(g.nodes)
            x, y = rng.sample(nodes, 2)
            max_hops = rng.randint(1, 4)
            exclude = rng.random() < 0.5
            result = enumerate_paths(g, x, y, max_hops, exclude)
            assert {p.entities for p in result.paths} == oracle_paths(g, x, y, max_hops, exclude)

    def test_paths_are_simple_and_edges_exist(self):
        rng = random.Random(59)
        for _ in range(50):
            g = random_graph(rng)
            nodes = sorted(g.nodes)
            x, y = rng.sample(nodes, 2)
            for path in enumerate_paths(g, x, y, 4).paths:
                assert len(set(path.entities)) == len(path.entities)
                for a, b, s in zip(path.entities, path.entities[1:], path.sentences):
                    edge = g.edge(a, b)
                    assert edge is not None and edge.sentence == s


class TestPathScore:
    def test_single_edge(self):
        assert path_score([0.8]) == 0.8

    def test_equal_edges(self):
        assert path_score([0.8, 0.8]) == pytest.approx(0.8, abs=1e-12)

    def test_hand_harmonic(self):
        assert path_score([1.0, 0.5]) == pytest.approx(2 / 3, abs=1e-12)

    def test_bounded_by_min_and_max_edge(self):
        rng = random.Random(4)
        for _ in range(500):
            scores = [rng.uniform(0.1, 1.0) for _ in range(rng.randint(1, 6))]
            value = path_score(scores)
            assert min(scores) - 1e-12 <= value <= max(scores) + 1e-12

    def test_one_hop_score_equals_edge_rd(self):
        rng = random.Random(44)
        for _ in range(100):
            rd = rng.uniform(0.1, 1.0)
            assert path_score([rd]) == rd


class TestRankAndRetrieve:
    def test_shorter_beats_higher_score(self):
        g = DescriptiveGraph.from_edges(
            [
                demo_edge("x", "a", "sa1", 0.61), demo_edge("a", "y", "sa2", 0.61),
                demo_edge("x", "b", "sb1", 0.95), demo_edge("b", "c", "sb2", 0.95),
                demo_edge("c", "y", "sb3", 0.95),
            ]
        )
        result = rank_and_retrieve(g, "x", "y", m=5)
        assert result.paths[0].entities == ("x", "a", "y")

    def test_equal_length_sorted_by_score(self):
        g = retrieval_demo_graph()
        result = rank_and_retrieve(g, "x", "y", m=2)
        assert [p.entities for p in result.paths] == [("x", "e11", "y"), ("x", "e21", "y")]
        assert result.paths[0].score > result.paths[1].score

    def test_m_zero_yields_empty(self):
        g = retrieval_demo_graph()
        assert rank_and_retrieve(g, "x", "y", m=0).paths == ()

    def test_matches_full_sort_oracle(self):
        rng = random.Random(69)
        for _ in range(200):
            g = random_graph(rng)
            nodes = sorted(g.nodes)
            x, y = rng.sample(nodes, 2)
            m = rng.randint(0, 6)
            result = rank_and_retrieve(g, x, y, m, max_hops=3)
            everything = enumerate_paths(g, x, y, max_hops=3)
            ordered = sorted(everything.paths, key=lambda p: (p.hops, -p.score, p.entities[1:-1]))
            assert list(result.paths) == ordered[:m]

    def test_repeat_calls_identical(self):
        g = retrieval_demo_graph()
        first = rank_and_retrieve(g, "x", "y", 5)
        second = rank_and_retrieve(g, "x", "y", 5)
        assert first == second


class TestEncodeInput:
    def test_three_hop_template(self):
        path = ReasoningPath(("x", "e31", "e32", "y"), ("s31", "s32", "s33"), 0.7)
        assert encode_input("x", "y", [path]) == [
            "entity1: x entity2: y path: x; e31; e32; y sentence1: s31 sentence2: s32 sentence3: s33"
        ]

    def test_zero_paths_pairs_only(self):
        assert encode_input("x", "y", []) == ["entity1: x entity2: y"]

    def test_one_hop(self):
        path = ReasoningPath(("x", "y"), ("s",), 0.9)
        assert encode_input("x", "y", [path]) == ["entity1: x entity2: y path: x; y sentence1: s"]

    def test_one_string_per_path(self):
        g = retrieval_demo_graph()
        paths = rank_and_retrieve(g, "x", "y", 4).paths
        assert len(encode_input("x", "y", paths)) == 4


def complete_bipartite(left: int, right: int, rng: random.Random) -> DescriptiveGraph:
    edges = []
    for i in range(left):
        for j in range(right):
            rd = round(rng.uniform(0.6, 0.999999), 6)
            edges.append(demo_edge(f"L{i:02d}", f"R{j:02d}", f"s-{i:02d}-{j:02d}", rd))
    return DescriptiveGraph.from_edges(edges)


class TestExportDataset:
    def test_pair_below_min_paths_excluded(self):
        # a 5-cycle gives each edge exactly one alternative path (4 hops away)
        edges = [demo_edge(f"n{i}", f"n{(i + 1) % 5}", f"s{i}", 0.8) for i in range(5)]
        g = DescriptiveGraph.from_edges(edges)
        records = list(build_records(g, m=3, min_paths=5, max_hops=4))
        assert records == []
        records = list(build_records(g, m=3, min_paths=1, max_hops=4))
        assert len(records) == 5

    def test_split_sizes_on_1000_records(self):
        assert split_sizes(1000) == (960, 20, 20)
        assert split_sizes(45) == (43, 1, 1)

    def test_bipartite_export_contract(self, tmp_path):
        rng = random.Random(10)
        g = complete_bipartite(40, 25, rng)
        assert g.n_edges() == 1000
        sizes = export_dataset(g, tmp_path, m=5, seed=7)
        assert sizes == (960, 20, 20)
        records = []
        for name in ("train.jsonl", "valid.jsonl", "test.jsonl"):
            with open(tmp_path / name, encoding="utf-8") as fh:
                records += [GenerationRecord.from_json(line) for line in fh]
        assert len(records) == 1000
        for record in records:
            assert len(record.inputs) == 5
            for encoded in record.inputs:
                assert f" {record.target} " not in encoded + " "
        # spot-check path availability against the exhaustive oracle
        sample = rng.sample(records, 5)
        for record in sample:
            assert len(oracle_paths(g, record.x, record.y, 3, True)) >= 5

    def test_deterministic_given_seed(self, tmp_path):
        rng = random.Random(10)
        g = complete_bipartite(6, 4, rng)
        export_dataset(g, tmp_path / "a", m=3, min_paths=1, seed=3)
        export_dataset(g, tmp_path / "b", m=3, min_paths=1, seed=3)
        export_dataset(g, tmp_path / "c", m=3, min_paths=1, seed=4)
        for name in ("train.jsonl", "valid.jsonl", "test.jsonl"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert (tmp_path / "a" / "train.jsonl").read_bytes() != (tmp_path / "c" / "train.jsonl").read_bytes()
