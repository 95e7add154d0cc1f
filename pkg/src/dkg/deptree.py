"""Dependency-tree path analysis.

Computes the shortest dependency path between two mention heads (the core
path), the paths from the core path out to every remaining token (sub paths),
and the relation patterns derived from them.  Patterns are sequences of
dependency labels, with ``i_`` marking steps traversed against the arc
direction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "Token",
    "MentionSpan",
    "DepTree",
    "PathStep",
    "DependencyPath",
    "TokenCategory",
    "MODIFYING_DEPENDENCIES",
    "CORE_DROP",
    "SUB_DROP",
    "mention_head",
    "core_path",
    "core_pattern",
    "normalize_subject_first",
    "sub_paths",
    "sub_pattern",
    "classify_tokens",
    "pattern_to_str",
    "pattern_from_str",
]


@dataclass(frozen=True)
class Token:
    """One token of a parsed sentence; ``head`` 0 means the root."""

    index: int
    text: str
    head: int
    deprel: str


@dataclass(frozen=True)
class MentionSpan:
    """Inclusive 1-based token span of an entity mention."""

    start: int
    end: int
    entity: str

    def indices(self) -> range:
        return range(self.start, self.end + 1)

    def overlaps(self, other: "MentionSpan") -> bool:
        return self.start <= other.end and other.start <= self.end


class DepTree:
    """A validated single-rooted dependency tree over 1-based token indices."""

    def __init__(self, tokens: Sequence[Token]):
        n = len(tokens)
        if n == 0:
            raise ValueError("empty sentence")
        heads = [0] * (n + 1)
        deprels = [""] * (n + 1)
        children: list[list[int]] = [[] for _ in range(n + 1)]
        root = 0
        for pos, tok in enumerate(tokens, start=1):
            if tok.index != pos:
                raise ValueError(f"token index {tok.index} at position {pos}: indices must be 1..n in order")
            if not 0 <= tok.head <= n:
                raise ValueError(f"token {pos}: head {tok.head} out of range [0, {n}]")
            heads[pos] = tok.head
            deprels[pos] = tok.deprel
            if tok.head == 0:
                if root:
                    raise ValueError(f"multiple roots: tokens {root} and {pos}")
                root = pos
            else:
                children[tok.head].append(pos)
        if not root:
            raise ValueError("no root token (head == 0)")
        # reachability from the root rules out cycles
        seen = [False] * (n + 1)
        stack = [root]
        while stack:
            u = stack.pop()
            seen[u] = True
            stack.extend(children[u])
        if not all(seen[1:]):
            missing = [i for i in range(1, n + 1) if not seen[i]]
            raise ValueError(f"arcs do not form a tree: tokens {missing} unreachable from root")
        self.tokens = list(tokens)
        self.n = n
        self.root = root
        self._heads = heads
        self._deprels = deprels
        self._children = children

    def head(self, i: int) -> int:
        return self._heads[i]

    def deprel(self, i: int) -> str:
        return self._deprels[i]

    def children(self, i: int) -> list[int]:
        return self._children[i]

    def text(self, i: int) -> str:
        return self.tokens[i - 1].text

    def ancestors(self, i: int) -> list[int]:
        """Chain from ``i`` up to the root, inclusive of both ends."""
        chain = [i]
        while self._heads[chain[-1]] != 0:
            chain.append(self._heads[chain[-1]])
        return chain


class PathStep(NamedTuple):
    deprel: str
    inverse: bool
    token: int  # index of the token this step enters


@dataclass(frozen=True)
class DependencyPath:
    """A walk through the tree: a start token plus the steps taken from it."""

    start: int
    steps: tuple[PathStep, ...]

    def nodes(self) -> list[int]:
        return [self.start] + [s.token for s in self.steps]

    @property
    def end(self) -> int:
        return self.steps[-1].token if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def reverse(self) -> "DependencyPath":
        """Same walk from the other end: step order reversed, directions flipped."""
        nodes = self.nodes()
        k = len(self.steps)
        steps = tuple(
            PathStep(self.steps[k - 1 - j].deprel, not self.steps[k - 1 - j].inverse, nodes[k - 1 - j])
            for j in range(k)
        )
        return DependencyPath(start=nodes[-1], steps=steps)


# Dependency labels whose subtrees modify the relation expressed by the core
# path.  Tokens reached through any other label are irrelevant to it.
MODIFYING_DEPENDENCIES = frozenset(
    {
        "acl", "advcl", "advmod", "amod", "det", "mark", "meta", "neg",
        "nn", "nmod", "npmod", "nummod", "poss", "prep", "quantmod", "relcl",
        "appos", "aux", "auxpass", "compound", "cop", "ccomp", "xcomp",
        "expl", "punct", "nsubj", "csubj", "csubjpass", "dobj", "iobj",
        "obj", "pobj",
    }
)

# Labels removed from patterns: they carry no relational content of their own.
CORE_DROP = frozenset({"conj", "appos"})
SUB_DROP = frozenset({"conj", "appos", "compound"})

SUBJECT_LABELS = ("nsubj", "nsubjpass")


def mention_head(tree: DepTree, span: MentionSpan) -> int:
    """Token of the span whose head lies outside it (leftmost if several)."""
    inside = set(span.indices())
    for i in span.indices():
        if tree.head(i) not in inside:
            return i
    raise ValueError(f"span {span.start}..{span.end} has no head token (cycle inside span)")


def core_path(tree: DepTree, head_a: int, head_b: int) -> DependencyPath:
    """Unique tree path from one mention head to the other.

    Climbs from ``head_a`` to the lowest common ancestor (inverse steps),
    then descends to ``head_b`` (forward steps).
    """
    if head_a == head_b:
        raise ValueError("mention heads coincide")
    chain_a = tree.ancestors(head_a)
    chain_b = tree.ancestors(head_b)
    in_a = {node: depth for depth, node in enumerate(chain_a)}
    lca = next(node for node in chain_b if node in in_a)
    steps: list[PathStep] = []
    for u in chain_a[: in_a[lca]]:
        steps.append(PathStep(tree.deprel(u), True, tree.head(u)))
    down = chain_b[: chain_b.index(lca)]
    for v in reversed(down):
        steps.append(PathStep(tree.deprel(v), False, v))
    return DependencyPath(start=head_a, steps=tuple(steps))


def _pattern(steps: Iterable[PathStep], drop: frozenset[str]) -> tuple[str, ...]:
    labels = [
        ("i_" + s.deprel) if s.inverse else s.deprel
        for s in steps
        if s.deprel not in drop
    ]
    out: list[str] = []
    for lab in labels:
        if out and lab in ("prep", "i_prep") and out[-1] == lab:
            continue  # collapse a run of same-direction prep steps
        out.append(lab)
    return tuple(out)


def core_pattern(path: DependencyPath) -> tuple[str, ...]:
    """Relation pattern of a core path: drop conj/appos, collapse prep runs."""
    return _pattern(path.steps, CORE_DROP)


def sub_pattern(path: DependencyPath) -> tuple[str, ...]:
    """Relation pattern of a sub path: drop conj/appos/compound, collapse prep runs."""
    return _pattern(path.steps, SUB_DROP)


class NormalizedPath(NamedTuple):
    path: DependencyPath
    pattern: tuple[str, ...]
    reversed: bool
    subject_first: bool


def normalize_subject_first(path: DependencyPath, pattern: tuple[str, ...]) -> NormalizedPath:
    """Orient the path so it starts at the subject entity, when either end is one.

    A pattern opening with an inverse subject label already starts at the
    subject.  One closing with a forward subject label has the subject at the
    far end, so the walk is reversed and its pattern recomputed.  Anything
    else is left untouched and flagged as having no subject endpoint.
    """
    if pattern and pattern[0] in ("i_nsubj", "i_nsubjpass"):
        return NormalizedPath(path, pattern, False, True)
    if pattern and pattern[-1] in SUBJECT_LABELS:
        rpath = path.reverse()
        return NormalizedPath(rpath, core_pattern(rpath), True, True)
    return NormalizedPath(path, pattern, False, False)


def sub_paths(tree: DepTree, core: DependencyPath) -> dict[int, DependencyPath]:
    """Path from the nearest core-path node to each token off the core path."""
    core_nodes = core.nodes()
    on_core = set(core_nodes)
    # Multi-source BFS over the undirected arc set.  The core path is a
    # connected subgraph of the tree, so each outside token has a unique
    # nearest core node and a unique path from it.
    pred: dict[int, int] = {c: 0 for c in core_nodes}
    queue = list(core_nodes)
    while queue:
        next_queue: list[int] = []
        for u in queue:
            neighbours = list(tree.children(u))
            if tree.head(u) != 0:
                neighbours.append(tree.head(u))
            for v in sorted(neighbours):
                if v not in pred:
                    pred[v] = u
                    next_queue.append(v)
        queue = next_queue
    out: dict[int, DependencyPath] = {}
    for t in range(1, tree.n + 1):
        if t in on_core:
            continue
        back = [t]
        while back[-1] not in on_core:
            back.append(pred[back[-1]])
        back.reverse()
        steps = []
        for u, v in zip(back, back[1:]):
            if tree.head(v) == u:
                steps.append(PathStep(tree.deprel(v), False, v))
            else:  # v is the parent of u
                steps.append(PathStep(tree.deprel(u), True, v))
        out[t] = DependencyPath(start=back[0], steps=tuple(steps))
    return out


@dataclass(frozen=True)
class TokenCategory:
    """Relevance class of a token: core, modifying (with its pattern), or irrelevant."""

    kind: str  # "core" | "modifying" | "irrelevant"
    pattern: tuple[str, ...] | None = None


def classify_tokens(
    tree: DepTree,
    core: DependencyPath,
    subpaths: Mapping[int, DependencyPath],
    modifying_set: frozenset[str] = MODIFYING_DEPENDENCIES,
) -> dict[int, TokenCategory]:
    """Assign every token to exactly one category.

    Core-path tokens are core.  An outside token whose entire sub path uses
    dropped labels (conj/appos/compound) expresses the same content as the
    core token it hangs off, so it is core as well.  Otherwise the first
    non-dropped arc decides: a modifying label makes the token modifying,
    anything else makes it irrelevant.  Dropped labels are transparent, and
    the arc's label is compared ignoring traversal direction.
    """
    on_core = set(core.nodes())
    out: dict[int, TokenCategory] = {}
    for t in range(1, tree.n + 1):
        if t in on_core:
            out[t] = TokenCategory("core")
            continue
        path = subpaths[t]
        first = next((s.deprel for s in path.steps if s.deprel not in SUB_DROP), None)
        if first is None:
            out[t] = TokenCategory("core")
        elif first in modifying_set:
            out[t] = TokenCategory("modifying", sub_pattern(path))
        else:
            out[t] = TokenCategory("irrelevant")
    return out


def pattern_to_str(pattern: Sequence[str]) -> str:
    """Serialize a pattern as ``|``-joined labels; the empty pattern is ``""``."""
    return "|".join(pattern)


def pattern_from_str(text: str) -> tuple[str, ...]:
    if text == "":
        return ()
    return tuple(text.split("|"))
