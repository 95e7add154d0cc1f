"""Toolkit for building descriptive knowledge graphs.

A descriptive knowledge graph links entities with full-sentence relation
descriptions mined from a dependency-parsed, hyperlink-annotated corpus.
The pipeline stages live in one module each: corpus ingestion, entity
embeddings, dependency-path analysis, pattern databases, scoring, the graph
store, and reasoning-path retrieval.  ``dkg.cli`` exposes them as
subcommands of the ``dkg`` executable.
"""

from dkg.deptree import DepTree, DependencyPath, MentionSpan, Token
from dkg.embeddings import EmbeddingStore
from dkg.graph import DescriptiveGraph, Edge
from dkg.patterns import PatternDatabase
from dkg.scoring import RDScorer, ScoredCandidate

__version__ = "0.1.0"

__all__ = [
    "DepTree",
    "DependencyPath",
    "MentionSpan",
    "Token",
    "EmbeddingStore",
    "DescriptiveGraph",
    "Edge",
    "PatternDatabase",
    "RDScorer",
    "ScoredCandidate",
    "__version__",
]
