"""Explicitness, significance and their harmonic-mean combination.

A sentence's explicitness is the normalized log frequency of its core-path
pattern; its significance is the mean per-token weight, where core tokens
weigh 1, modifying tokens weigh the normalized log frequency of their
sub-path pattern, and irrelevant tokens weigh 0.  The final score is the
harmonic mean of the two.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from dkg.corpus import CandidateDescription, candidate_from_json, candidate_to_json
from dkg.deptree import (
    MODIFYING_DEPENDENCIES,
    TokenCategory,
    classify_tokens,
    sub_paths,
)
from dkg.patterns import PatternDatabase, build_databases, merge

__all__ = [
    "ScoredCandidate",
    "exp_score",
    "token_weight",
    "sig_score",
    "rd_score",
    "score_candidate",
    "RDScorer",
    "scored_to_json",
    "scored_from_json",
]


def exp_score(pattern: Sequence[str], core_db: PatternDatabase) -> float:
    """Normalized logarithmic frequency of a core-path pattern, in [0, 1]."""
    f_max = core_db.max_frequency()
    if f_max == 0:
        return 0.0
    f_p = core_db.frequency(pattern)
    return math.log(f_p + 1) / math.log(f_max + 1)


def token_weight(category: TokenCategory, sub_db: PatternDatabase) -> float:
    """Per-token weight: 1 for core, log-frequency ratio for modifying, else 0."""
    if category.kind == "core":
        return 1.0
    if category.kind == "modifying":
        f_max = sub_db.max_frequency()
        if f_max == 0:
            return 0.0
        return math.log(sub_db.frequency(category.pattern) + 1) / math.log(f_max + 1)
    return 0.0


def sig_score(token_weights: Sequence[float], sentence_length: int) -> float:
    """Mean token weight over the whole sentence, punctuation included."""
    if len(token_weights) != sentence_length:
        raise ValueError(f"{len(token_weights)} weights for {sentence_length} tokens")
    if sentence_length == 0:
        return 0.0
    return sum(token_weights) / sentence_length


def rd_score(exp: float, sig: float) -> float:
    """Harmonic mean of explicitness and significance; 0 when both vanish."""
    if exp + sig == 0.0:
        return 0.0
    return 2.0 * exp * sig / (exp + sig)


@dataclass
class ScoredCandidate:
    candidate: CandidateDescription
    exp: float
    sig: float
    rd: float
    token_weights: list[float]

    def sort_key(self):
        return self.candidate.sort_key()


def score_candidate(
    candidate: CandidateDescription,
    core_db: PatternDatabase,
    sub_db: PatternDatabase,
    modifying_set: frozenset[str] = MODIFYING_DEPENDENCIES,
) -> ScoredCandidate:
    """Full score of one candidate against built pattern databases."""
    tree = candidate.tree()
    paths = sub_paths(tree, candidate.core_path)
    categories = classify_tokens(tree, candidate.core_path, paths, modifying_set)
    weights = [token_weight(categories[i], sub_db) for i in range(1, tree.n + 1)]
    exp = exp_score(candidate.pattern(), core_db)
    sig = sig_score(weights, tree.n)
    return ScoredCandidate(candidate, exp, sig, rd_score(exp, sig), weights)


class RDScorer(BaseEstimator):
    """Self-supervised relation-description scorer with a fit/transform API.

    ``fit`` builds the core- and sub-path pattern databases from candidates
    whose entity relevance is at least ``theta_build``; ``transform`` scores
    candidates against them.  Fitted databases are exposed as ``core_db_``
    and ``sub_db_`` so they can be persisted and reloaded between stages.
    """

    def __init__(
        self,
        theta_build: float = 0.5,
        modifying_set: frozenset[str] = MODIFYING_DEPENDENCIES,
    ):
        self.theta_build = theta_build
        self.modifying_set = modifying_set

    def _validate_params(self) -> None:
        if not 0.0 <= self.theta_build <= 1.0:
            raise ValueError(f"theta_build must be in [0, 1], got {self.theta_build}")

    def fit(self, candidates: Iterable[CandidateDescription], y=None) -> "RDScorer":
        self._validate_params()
        core_db, sub_db, used = build_databases(candidates, self.theta_build, self.modifying_set)
        self.core_db_ = core_db
        self.sub_db_ = sub_db
        self.n_candidates_used_ = used
        return self

    def set_databases(self, core_db: PatternDatabase, sub_db: PatternDatabase) -> "RDScorer":
        """Adopt previously built (e.g. merged or loaded) databases."""
        self._validate_params()
        self.core_db_ = core_db
        self.sub_db_ = sub_db
        self.n_candidates_used_ = sum(core_db.counts.values())
        return self

    def transform(self, candidates: Iterable[CandidateDescription]) -> list[ScoredCandidate]:
        check_is_fitted(self, "core_db_")
        return [
            score_candidate(c, self.core_db_, self.sub_db_, self.modifying_set)
            for c in candidates
        ]

    def fit_transform(self, candidates, y=None) -> list[ScoredCandidate]:
        materialized = list(candidates)
        return self.fit(materialized).transform(materialized)


def scored_to_json(sc: ScoredCandidate) -> str:
    """Candidate JSON extended with exp/sig/rd at six decimal places."""
    base = candidate_to_json(sc.candidate)
    weights = ", ".join(f"{w:.6f}" for w in sc.token_weights)
    return (
        f'{base[:-1]}, "exp": {sc.exp:.6f}, "sig": {sc.sig:.6f}, '
        f'"rd": {sc.rd:.6f}, "weights": [{weights}]}}'
    )


def scored_from_json(line: str) -> ScoredCandidate:
    obj = json.loads(line)
    return ScoredCandidate(
        candidate=candidate_from_json(line),
        exp=obj["exp"],
        sig=obj["sig"],
        rd=obj["rd"],
        token_weights=list(obj["weights"]),
    )
