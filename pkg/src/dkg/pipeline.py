"""Stage drivers: each reads its inputs, fans work out to a bounded pool,
and writes byte-stable outputs under the configured directory.

Documents (and candidate chunks) are independent work units; merging sorts
results into a fixed global order, so outputs are identical for any worker
count.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence, TypeVar

from dkg import corpus as corpus_mod
from dkg import graph as graph_mod
from dkg import retrieval
from dkg.config import PipelineConfig
from dkg.corpus import CandidateDescription, TitleIndex, ingest_document, read_corpus
from dkg.embeddings import EmbeddingStore
from dkg.patterns import PatternDatabase, build_databases, merge
from dkg.scoring import RDScorer, ScoredCandidate, scored_from_json, scored_to_json

__all__ = [
    "CANDIDATES_FILE",
    "INGEST_STATS_FILE",
    "CORE_DB_FILE",
    "SUB_DB_FILE",
    "SCORED_FILE",
    "GRAPH_DIR",
    "AUDIT_FILE",
    "DATASET_DIR",
    "run_ingest",
    "run_build_patterns",
    "run_score",
    "run_build_graph",
    "run_export_dataset",
]

CANDIDATES_FILE = "candidates.jsonl"
INGEST_STATS_FILE = "ingest_stats.json"
CORE_DB_FILE = "patterns_core.tsv"
SUB_DB_FILE = "patterns_sub.tsv"
SCORED_FILE = "scored.jsonl"
GRAPH_DIR = "graph"
AUDIT_FILE = "audit_top5.jsonl"
DATASET_DIR = "dataset"

T = TypeVar("T")
R = TypeVar("R")


def _parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _chunks(items: Sequence[T], n: int) -> list[Sequence[T]]:
    if not items:
        return []
    size = max(1, (len(items) + n - 1) // n)
    return [items[i : i + size] for i in range(0, len(items), size)]


def run_ingest(cfg: PipelineConfig) -> Counter:
    """Corpus -> filtered candidate stream plus per-reason statistics."""
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    embeddings = EmbeddingStore.load(cfg.embeddings)
    title_index = TitleIndex(embeddings.titles())
    documents = list(read_corpus(cfg.corpus))

    def work(doc):
        stats = Counter()
        return ingest_document(doc, title_index, embeddings, stats), stats

    results = _parallel_map(work, documents, cfg.workers)
    candidates = [c for cands, _ in results for c in cands]
    candidates.sort(key=CandidateDescription.sort_key)
    stats = Counter()
    for _, doc_stats in results:
        stats.update(doc_stats)
    stats["documents"] = len(documents)
    with open(out / CANDIDATES_FILE, "w", encoding="utf-8") as fh:
        for candidate in candidates:
            fh.write(corpus_mod.candidate_to_json(candidate) + "\n")
    with open(out / INGEST_STATS_FILE, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(dict(sorted(stats.items())), indent=2, ensure_ascii=False) + "\n")
    return stats


def _read_candidates(path: Path) -> list[CandidateDescription]:
    with open(path, encoding="utf-8") as fh:
        return [corpus_mod.candidate_from_json(line) for line in fh if line.strip()]


def run_build_patterns(cfg: PipelineConfig) -> tuple[PatternDatabase, PatternDatabase]:
    """Candidates -> core and sub pattern databases (shards merged at the end)."""
    out = cfg.out_dir()
    candidates = _read_candidates(out / CANDIDATES_FILE)

    def work(chunk):
        return build_databases(chunk, cfg.theta_build, cfg.modifying_deps)

    shards = _parallel_map(work, _chunks(candidates, cfg.workers), cfg.workers)
    if shards:
        core_db = merge([s[0] for s in shards])
        sub_db = merge([s[1] for s in shards])
    else:
        core_db, sub_db = PatternDatabase("core"), PatternDatabase("sub")
    core_db.save(out / CORE_DB_FILE)
    sub_db.save(out / SUB_DB_FILE)
    return core_db, sub_db


def run_score(cfg: PipelineConfig) -> list[ScoredCandidate]:
    """Candidates + databases -> scored candidates, preserving input order."""
    out = cfg.out_dir()
    candidates = _read_candidates(out / CANDIDATES_FILE)
    scorer = RDScorer(cfg.theta_build, cfg.modifying_deps).set_databases(
        PatternDatabase.load(out / CORE_DB_FILE), PatternDatabase.load(out / SUB_DB_FILE)
    )
    chunks = _chunks(candidates, cfg.workers)
    scored = [sc for chunk in _parallel_map(scorer.transform, chunks, cfg.workers) for sc in chunk]
    with open(out / SCORED_FILE, "w", encoding="utf-8") as fh:
        for sc in scored:
            fh.write(scored_to_json(sc) + "\n")
    return scored


def run_build_graph(cfg: PipelineConfig) -> graph_mod.DescriptiveGraph:
    """Scored candidates -> thresholded graph directory plus a top-5 audit log."""
    out = cfg.out_dir()
    with open(out / SCORED_FILE, encoding="utf-8") as fh:
        scored = [scored_from_json(line) for line in fh if line.strip()]
    groups: dict[tuple[str, str], list[ScoredCandidate]] = {}
    for sc in scored:
        groups.setdefault((sc.candidate.entity_a, sc.candidate.entity_b), []).append(sc)
    best = [graph_mod.select_best(group) for _, group in sorted(groups.items())]
    graph = graph_mod.build(best, cfg.theta_rel, cfg.theta_rd)
    graph.save(out / GRAPH_DIR)
    with open(out / GRAPH_DIR / AUDIT_FILE, "w", encoding="utf-8") as fh:
        for pair, group in sorted(groups.items()):
            top = sorted(group, key=lambda sc: (-sc.rd, sc.candidate.doc_id, sc.candidate.sent_idx))[:5]
            fh.write(
                json.dumps(
                    {
                        "entity_a": pair[0],
                        "entity_b": pair[1],
                        "top": [
                            {
                                "doc_id": sc.candidate.doc_id,
                                "sent_idx": sc.candidate.sent_idx,
                                "rd": round(sc.rd, 6),
                            }
                            for sc in top
                        ],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    return graph


def run_export_dataset(cfg: PipelineConfig) -> tuple[int, int, int]:
    """Graph -> shuffled train/valid/test record files."""
    out = cfg.out_dir()
    graph = graph_mod.DescriptiveGraph.load(out / GRAPH_DIR)
    edge_keys = sorted(graph.edges)

    def work(chunk):
        return list(retrieval.build_records(graph, cfg.m, cfg.min_paths, cfg.max_hops, keys=chunk))

    record_chunks = _parallel_map(work, _chunks(edge_keys, cfg.workers), cfg.workers)
    records = [r for chunk in record_chunks for r in chunk]
    rng = random.Random(cfg.seed)
    rng.shuffle(records)
    n_train, n_valid, n_test = retrieval.split_sizes(len(records))
    dataset_dir = out / DATASET_DIR
    dataset_dir.mkdir(parents=True, exist_ok=True)
    parts = {
        "train.jsonl": records[:n_train],
        "valid.jsonl": records[n_train : n_train + n_valid],
        "test.jsonl": records[n_train + n_valid :],
    }
    for name, part in parts.items():
        with open(dataset_dir / name, "w", encoding="utf-8") as fh:
            for record in part:
                fh.write(record.to_json() + "\n")
    return (n_train, n_valid, n_test)
