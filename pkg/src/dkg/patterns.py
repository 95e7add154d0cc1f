"""Frequency databases of core-path and sub-path relation patterns.

Both databases are plain pattern -> count maps built from high-relevance
candidates.  The sub database counts each distinct pattern once per
sentence.  A sentence's pattern set is prefix-closed (the tokens along a
sub path realize every prefix of its pattern), so a pattern can never be
more frequent than its parent prefix -- the property the token weights rely
on.  Per-token counting would break it: sibling branches and trailing
dropped arcs repeat a deep pattern without repeating its prefix.
"""
from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from dkg.corpus import CandidateDescription
from dkg.deptree import (
    classify_tokens,
    pattern_from_str,
    pattern_to_str,
    sub_paths,
    sub_pattern,
    MODIFYING_DEPENDENCIES,
)

__all__ = ["PatternDatabase", "PatternDbFormatError", "accumulate", "merge", "build_databases"]

DEFAULT_BUILD_THRESHOLD = 0.5


class PatternDbFormatError(ValueError):
    """Raised for unreadable pattern database files."""


class PatternDatabase:
    """Counts of relation patterns of one kind ("core" or "sub")."""

    def __init__(self, kind: str, counts: dict[tuple[str, ...], int] | None = None):
        if kind not in ("core", "sub"):
            raise ValueError(f"unknown database kind {kind!r}")
        self.kind = kind
        self.counts: Counter = Counter(counts or {})

    def add(self, pattern: Sequence[str], n: int = 1) -> None:
        self.counts[tuple(pattern)] += n

    def frequency(self, pattern: Sequence[str]) -> int:
        return self.counts.get(tuple(pattern), 0)

    def max_frequency(self) -> int:
        return max(self.counts.values(), default=0)

    def __len__(self) -> int:
        return len(self.counts)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PatternDatabase)
            and self.kind == other.kind
            and self.counts == other.counts
        )

    def save(self, path: str | Path) -> None:
        """Write the database sorted by descending count, then pattern."""
        rows = sorted(self.counts.items(), key=lambda kv: (-kv[1], pattern_to_str(kv[0])))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"#kind={self.kind}\n")
            for pattern, count in rows:
                fh.write(f"{pattern_to_str(pattern)}\t{count}\n")

    @classmethod
    def load(cls, path: str | Path) -> "PatternDatabase":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header not in ("#kind=core", "#kind=sub"):
                raise PatternDbFormatError(f"{path}:1: bad header {header!r}")
            db = cls(header.removeprefix("#kind="))
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    pattern_text, count_text = line.split("\t")
                    count = int(count_text)
                except ValueError as exc:
                    raise PatternDbFormatError(f"{path}:{lineno}: malformed line {line!r}") from exc
                db.add(pattern_from_str(pattern_text), count)
        return db


def accumulate(
    db_core: PatternDatabase,
    db_sub: PatternDatabase,
    candidate: CandidateDescription,
    theta_build: float = DEFAULT_BUILD_THRESHOLD,
    modifying_set: frozenset[str] = MODIFYING_DEPENDENCIES,
) -> bool:
    """Count one candidate's patterns if its entity relevance clears the bar.

    The core pattern counts once; the sub database gets each distinct
    pattern reached by a modifying token, once per sentence.  Returns
    whether the candidate was counted.
    """
    if candidate.relevance < theta_build:
        return False
    db_core.add(candidate.pattern())
    tree = candidate.tree()
    paths = sub_paths(tree, candidate.core_path)
    categories = classify_tokens(tree, candidate.core_path, paths, modifying_set)
    seen = {
        sub_pattern(paths[token])
        for token, category in categories.items()
        if token in paths and category.kind == "modifying"
    }
    for pattern in sorted(seen):
        db_sub.add(pattern)
    return True


def build_databases(
    candidates: Iterable[CandidateDescription],
    theta_build: float = DEFAULT_BUILD_THRESHOLD,
    modifying_set: frozenset[str] = MODIFYING_DEPENDENCIES,
) -> tuple[PatternDatabase, PatternDatabase, int]:
    """One shard's databases; returns (core db, sub db, candidates counted)."""
    db_core = PatternDatabase("core")
    db_sub = PatternDatabase("sub")
    used = 0
    for candidate in candidates:
        if accumulate(db_core, db_sub, candidate, theta_build, modifying_set):
            used += 1
    return db_core, db_sub, used


def merge(shards: Sequence[PatternDatabase]) -> PatternDatabase:
    """Pointwise sum of same-kind shards; an empty list yields an empty core db."""
    if not shards:
        return PatternDatabase("core")
    kinds = {s.kind for s in shards}
    if len(kinds) > 1:
        raise ValueError(f"cannot merge databases of mixed kinds: {sorted(kinds)}")
    merged = PatternDatabase(shards[0].kind)
    for shard in shards:
        merged.counts.update(shard.counts)
    return merged
