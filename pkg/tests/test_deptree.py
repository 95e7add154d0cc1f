"""Dependency path computation against brute-force graph oracles."""
from __future__ import annotations

import random

import pytest

from dkg.deptree import (
    CORE_DROP,
    SUB_DROP,
    DependencyPath,
    DepTree,
    MentionSpan,
    PathStep,
    Token,
    classify_tokens,
    core_path,
    core_pattern,
    mention_head,
    normalize_subject_first,
    pattern_from_str,
    pattern_to_str,
    sub_paths,
    sub_pattern,
)
from fixtures import LABELS, S1_SPAN_ALGO, S1_SPAN_ML, random_tree, s1_tree


def bfs_path(tree: DepTree, a: int, b: int) -> list[int]:
    """Shortest path over the undirected arc set, by plain breadth-first search."""
    adj: dict[int, list[int]] = {i: [] for i in range(1, tree.n + 1)}
    for tok in tree.tokens:
        if tok.head != 0:
            adj[tok.index].append(tok.head)
            adj[tok.head].append(tok.index)
    parent = {a: 0}
    queue = [a]
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        queue = nxt
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


class TestTreeValidation:
    def test_multiple_roots_rejected(self):
        with pytest.raises(ValueError, match="multiple roots"):
            DepTree([Token(1, "a", 0, "ROOT"), Token(2, "b", 0, "ROOT")])

    def test_cycle_rejected(self):
        with pytest.raises(ValueError, match="unreachable"):
            DepTree([Token(1, "a", 0, "ROOT"), Token(2, "b", 3, "dep"), Token(3, "c", 2, "dep")])

    def test_head_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            DepTree([Token(1, "a", 5, "dep")])


class TestMentionHead:
    def test_compound_span_head_is_governing_token(self):
        tree = s1_tree()
        assert mention_head(tree, S1_SPAN_ML) == 2  # "learning"

    def test_single_token_span(self):
        tree = s1_tree()
        assert mention_head(tree, S1_SPAN_ALGO) == 9

    def test_non_constituent_span_takes_leftmost(self):
        # both tokens of the span attach outside it
        tree = DepTree(
            [
                Token(1, "a", 4, "amod"),
                Token(2, "b", 4, "amod"),
                Token(3, "c", 4, "amod"),
                Token(4, "d", 0, "ROOT"),
            ]
        )
        assert mention_head(tree, MentionSpan(1, 2, "ab")) == 1


class TestCorePath:
    def test_worked_example_path_and_pattern(self):
        tree = s1_tree()
        path = core_path(tree, 2, 9)
        assert path.nodes() == [2, 3, 5, 8, 9]
        assert path.steps == (
            PathStep("nsubj", True, 3),
            PathStep("dobj", False, 5),
            PathStep("prep", False, 8),
            PathStep("pobj", False, 9),
        )
        assert core_pattern(path) == ("i_nsubj", "dobj", "prep", "pobj")
        assert pattern_to_str(core_pattern(path)) == "i_nsubj|dobj|prep|pobj"

    def test_parent_child_single_step(self):
        tree = DepTree([Token(1, "v", 0, "ROOT"), Token(2, "n", 1, "dobj")])
        path = core_path(tree, 2, 1)
        assert path.steps == (PathStep("dobj", True, 1),)

    def test_matches_bfs_oracle_on_random_trees(self):
        rng = random.Random(52)
        for _ in range(1000):
            tree = random_tree(rng, rng.randint(2, 20))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            path = core_path(tree, a, b)
            assert path.nodes() == bfs_path(tree, a, b)
            # direction flags agree with the arcs
            nodes = path.nodes()
            for u, step in zip(nodes, path.steps):
                if step.inverse:
                    assert tree.head(u) == step.token and tree.deprel(u) == step.deprel
                else:
                    assert tree.head(step.token) == u and tree.deprel(step.token) == step.deprel

    def test_reversal_flips_steps(self):
        rng = random.Random(7)
        for _ in range(200):
            tree = random_tree(rng, rng.randint(2, 15))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            fwd = core_path(tree, a, b)
            rev = core_path(tree, b, a)
            assert fwd.reverse() == rev
            assert rev.nodes() == fwd.nodes()[::-1]


class TestPatterns:
    def test_conj_dropped(self):
        path = DependencyPath(1, (PathStep("nsubj", True, 2), PathStep("conj", False, 3)))
        assert core_pattern(path) == ("i_nsubj",)

    def test_consecutive_same_direction_prep_collapsed(self):
        path = DependencyPath(
            1,
            (
                PathStep("nsubj", True, 2),
                PathStep("prep", False, 3),
                PathStep("prep", False, 4),
                PathStep("pobj", False, 5),
            ),
        )
        assert core_pattern(path) == ("i_nsubj", "prep", "pobj")

    def test_opposite_direction_preps_kept(self):
        path = DependencyPath(1, (PathStep("prep", True, 2), PathStep("prep", False, 3)))
        assert core_pattern(path) == ("i_prep", "prep")

    def test_drop_then_collapse(self):
        # a dropped conj between two preps still lets them collapse
        path = DependencyPath(
            1, (PathStep("prep", False, 2), PathStep("conj", False, 3), PathStep("prep", False, 4))
        )
        assert core_pattern(path) == ("prep",)

    def test_sub_pattern_drops_compound(self):
        assert sub_pattern(DependencyPath(1, (PathStep("conj", False, 2),))) == ()
        assert sub_pattern(DependencyPath(1, (PathStep("amod", False, 2),))) == ("amod",)
        assert sub_pattern(
            DependencyPath(1, (PathStep("compound", False, 2), PathStep("amod", False, 3)))
        ) == ("amod",)

    def test_sub_pattern_collapses_preps(self):
        path = DependencyPath(
            1, (PathStep("prep", False, 2), PathStep("prep", False, 3), PathStep("pobj", False, 4))
        )
        assert sub_pattern(path) == ("prep", "pobj")

    def test_serialization_round_trip(self):
        for pattern in [(), ("i_nsubj",), ("i_nsubj", "dobj", "prep", "pobj")]:
            assert pattern_from_str(pattern_to_str(pattern)) == pattern

    def test_no_emitted_pattern_contains_dropped_labels(self):
        rng = random.Random(11)
        for _ in range(300):
            tree = random_tree(rng, rng.randint(2, 15))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            path = core_path(tree, a, b)
            for label in core_pattern(path):
                assert label.removeprefix("i_") not in CORE_DROP
            for sub in sub_paths(tree, path).values():
                for label in sub_pattern(sub):
                    assert label.removeprefix("i_") not in SUB_DROP


class TestNormalizeSubjectFirst:
    def test_already_subject_first_is_unchanged(self):
        path = DependencyPath(1, (PathStep("nsubj", True, 2), PathStep("dobj", False, 3)))
        result = normalize_subject_first(path, core_pattern(path))
        assert result.path is path
        assert not result.reversed
        assert result.subject_first

    def test_subject_at_far_end_reverses(self):
        # dobj up to the verb, nsubj down to the other entity
        path = DependencyPath(1, (PathStep("dobj", True, 2), PathStep("nsubj", False, 3)))
        result = normalize_subject_first(path, core_pattern(path))
        assert result.reversed and result.subject_first
        assert result.pattern == ("i_nsubj", "dobj")
        assert result.path.nodes() == [3, 2, 1]

    def test_no_subject_end_is_flagged(self):
        path = DependencyPath(
            1, (PathStep("dobj", True, 2), PathStep("prep", False, 3), PathStep("pobj", False, 4))
        )
        result = normalize_subject_first(path, core_pattern(path))
        assert not result.reversed
        assert not result.subject_first
        assert result.pattern == ("i_dobj", "prep", "pobj")


class TestSubPaths:
    def test_worked_example_conjunct(self):
        tree = s1_tree()
        core = core_path(tree, 2, 9)
        subs = sub_paths(tree, core)
        # "construction" hangs off core token "study" by a conj arc
        assert subs[7] == DependencyPath(5, (PathStep("conj", False, 7),))

    def test_direct_child_single_forward_step(self):
        tree = s1_tree()
        core = core_path(tree, 2, 9)
        assert subs_single_step(tree, core, 4) == ("det", False)

    def test_nearest_core_node_matches_bfs_oracle(self):
        rng = random.Random(99)
        for _ in range(1000):
            tree = random_tree(rng, rng.randint(2, 20))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            core = core_path(tree, a, b)
            core_nodes = core.nodes()
            subs = sub_paths(tree, core)
            for t in range(1, tree.n + 1):
                if t in core_nodes:
                    assert t not in subs
                    continue
                lengths = {c: len(bfs_path(tree, c, t)) - 1 for c in core_nodes}
                best = min(lengths.values())
                assert len(subs[t].steps) == best
                assert lengths[subs[t].start] == best
                assert subs[t].nodes() == bfs_path(tree, subs[t].start, t)

    def test_sub_pattern_prefix_closure(self):
        # the pattern of every prefix of a sub path prefixes the full pattern
        rng = random.Random(3)
        for _ in range(300):
            tree = random_tree(rng, rng.randint(2, 16))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            core = core_path(tree, a, b)
            for sub in sub_paths(tree, core).values():
                full = sub_pattern(sub)
                for k in range(len(sub.steps)):
                    prefix = DependencyPath(sub.start, sub.steps[:k])
                    assert sub_pattern(prefix) == full[: len(sub_pattern(prefix))]


def subs_single_step(tree, core, token):
    sub = sub_paths(tree, core)[token]
    assert len(sub.steps) == 1
    return (sub.steps[0].deprel, sub.steps[0].inverse)


class TestClassifyTokens:
    def test_worked_example_categories(self):
        tree = s1_tree()
        core = core_path(tree, 2, 9)
        subs = sub_paths(tree, core)
        cats = classify_tokens(tree, core, subs)
        assert {i for i, c in cats.items() if c.kind == "core"} == {1, 2, 3, 5, 7, 8, 9}
        # the conjunction attached straight to the core via cc is the only
        # token unrelated to the relation; everything else modifies it
        assert {i for i, c in cats.items() if c.kind == "irrelevant"} == {6}
        assert cats[4].pattern == ("det",)
        assert cats[19].pattern == ("punct",)
        assert cats[18].pattern == ("relcl", "prep", "pobj")

    def test_cc_attachment_is_irrelevant(self):
        tree = s1_tree()
        core = core_path(tree, 2, 9)
        cats = classify_tokens(tree, core, sub_paths(tree, core))
        assert cats[6].kind == "irrelevant"

    def test_every_token_categorized_exactly_once(self):
        rng = random.Random(21)
        for _ in range(200):
            tree = random_tree(rng, rng.randint(2, 16))
            a, b = rng.sample(range(1, tree.n + 1), 2)
            core = core_path(tree, a, b)
            cats = classify_tokens(tree, core, sub_paths(tree, core))
            assert sorted(cats) == list(range(1, tree.n + 1))
            for cat in cats.values():
                assert cat.kind in ("core", "modifying", "irrelevant")
                assert (cat.pattern is not None) == (cat.kind == "modifying")
