"""Corpus ingestion: mention dictionaries, co-occurrence scan, candidate filtering.

Input is a pre-parsed corpus in JSON Lines, one document per line.  Each
document carries its page title, and each sentence its tokens (with head and
dependency label) plus hyperlink annotations.  The scan builds a per-document
mention dictionary from the links, locates entity co-occurrences with it, and
emits candidate relation descriptions that survive the length, noun-phrase
and subject-pattern filters.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from dkg.deptree import (
    DependencyPath,
    DepTree,
    MentionSpan,
    PathStep,
    Token,
    core_path,
    core_pattern,
    mention_head,
    normalize_subject_first,
)
from dkg.embeddings import EmbeddingStore

__all__ = [
    "Link",
    "ParsedSentence",
    "Document",
    "TitleIndex",
    "LocalDictionary",
    "CandidateDescription",
    "CorpusFormatError",
    "MIN_TOKENS",
    "MAX_TOKENS",
    "craft_mention",
    "correct_link",
    "compound_complete",
    "scan_document",
    "extract_candidates",
    "filter_candidate",
    "ingest_document",
    "read_corpus",
    "candidate_to_json",
    "candidate_from_json",
]

MIN_TOKENS = 5
MAX_TOKENS = 50

_PARENTHETICAL = re.compile(r"\([^()]*\)")


class CorpusFormatError(ValueError):
    """Raised for corpus lines that cannot be interpreted as documents."""


@dataclass(frozen=True)
class Link:
    """Hyperlink annotation: inclusive 1-based token span plus raw target."""

    start: int
    end: int
    target: str


@dataclass
class ParsedSentence:
    doc_id: str
    sent_idx: int
    tokens: list[Token]
    links: list[Link] = field(default_factory=list)
    mentions: list[MentionSpan] = field(default_factory=list)

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)

    def tree(self) -> DepTree:
        return DepTree(self.tokens)


@dataclass
class Document:
    doc_id: str
    title: str
    sentences: list[ParsedSentence]


class TitleIndex:
    """Exact and case-insensitive lookup over the known entity titles.

    Case-insensitive lookup recognizes both the full title and its crafted
    mention form, so a lower-cased link such as "mercury" can still reach
    "Mercury (planet)" and "Mercury (element)".
    """

    def __init__(self, titles: Iterable[str]):
        self.exact = set(titles)
        self._by_lower: dict[str, set[str]] = {}
        for t in self.exact:
            self._by_lower.setdefault(t.lower(), set()).add(t)
            try:
                self._by_lower.setdefault(craft_mention(t).lower(), set()).add(t)
            except ValueError:
                pass  # title with no usable mention form

    def __contains__(self, title: str) -> bool:
        return title in self.exact

    def case_insensitive(self, raw: str) -> list[str]:
        return sorted(self._by_lower.get(raw.lower(), ()))


def craft_mention(entity_title: str) -> str:
    """Surface mention of a title: parentheticals and post-comma content removed.

    Raises ``ValueError`` when nothing is left, which marks the title as
    unusable for mention matching.
    """
    text = _PARENTHETICAL.sub(" ", entity_title)
    text = text.split(",", 1)[0]
    mention = " ".join(text.split())
    if not mention:
        raise ValueError(f"unusable entity title: {entity_title!r}")
    return mention


def correct_link(
    raw_target: str,
    title_index: TitleIndex,
    embeddings: EmbeddingStore,
    page_title: str,
) -> tuple[str | None, str | None]:
    """Resolve a raw link target to a known title, or skip it.

    Returns ``(title, None)`` on success and ``(None, reason)`` on a skip.
    An exact title match wins; otherwise a unique case-insensitive match is
    taken, and among several the one most similar to the current page by
    embedding cosine (ties to the lexicographically smallest title).
    """
    if raw_target in title_index:
        return raw_target, None
    matches = title_index.case_insensitive(raw_target)
    if not matches:
        return None, "dangling_link"
    if len(matches) == 1:
        return matches[0], None
    best: str | None = None
    best_sim = float("-inf")
    for title in matches:  # sorted by construction
        sim = embeddings.relevance(page_title, title)
        if sim is not None and sim > best_sim:
            best, best_sim = title, sim
    if best is None:
        return None, "missing_embedding"
    return best, None


class LocalDictionary:
    """Per-document map from mention word sequence to entity title.

    Each hyperlink overwrites its mention's entry, so matching at any point
    in the scan reflects the most recent link seen.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[str, ...], str] = {}
        self._max_words = 0

    def __len__(self) -> int:
        return len(self._entries)

    def set(self, mention: str, entity: str) -> None:
        words = tuple(mention.split())
        self._entries[words] = entity
        self._max_words = max(self._max_words, len(words))

    def match(self, sentence: ParsedSentence) -> list[MentionSpan]:
        """Leftmost-longest, case-sensitive whole-token matches in one sentence."""
        texts = [t.text for t in sentence.tokens]
        n = len(texts)
        spans: list[MentionSpan] = []
        i = 0
        while i < n:
            hit = None
            for length in range(min(self._max_words, n - i), 0, -1):
                entity = self._entries.get(tuple(texts[i : i + length]))
                if entity is not None:
                    hit = MentionSpan(i + 1, i + length, entity)
                    break
            if hit is None:
                i += 1
            else:
                spans.append(hit)
                i = hit.end
        return spans


def compound_complete(tree: DepTree, span: MentionSpan) -> bool:
    """Whether the span already covers its full compound noun phrase.

    The closure adds every token reachable from the span through compound
    arcs, in either direction; a closure larger than the span means the
    mention is a fragment of a bigger noun phrase.
    """
    inside = set(span.indices())
    closure = set(inside)
    frontier = list(inside)
    while frontier:
        t = frontier.pop()
        h = tree.head(t)
        if tree.deprel(t) == "compound" and h != 0 and h not in closure:
            closure.add(h)
            frontier.append(h)
        for c in tree.children(t):
            if tree.deprel(c) == "compound" and c not in closure:
                closure.add(c)
                frontier.append(c)
    return closure == inside


def scan_document(
    doc: Document,
    title_index: TitleIndex,
    embeddings: EmbeddingStore,
    stats: Counter | None = None,
) -> Iterator[tuple[ParsedSentence, list[MentionSpan]]]:
    """Single ordered pass over a document's sentences.

    Each sentence's links update the dictionary first (after target
    correction), then its tokens are matched against the dictionary as it
    stands.  Unresolvable links are counted and skipped, never fatal.
    """
    stats = stats if stats is not None else Counter()
    dictionary = LocalDictionary()
    for sentence in doc.sentences:
        for link in sentence.links:
            stats["links_total"] += 1
            entity, reason = correct_link(link.target, title_index, embeddings, doc.title)
            if entity is None:
                stats[f"links_skipped_{reason}"] += 1
                continue
            try:
                mention = craft_mention(entity)
            except ValueError:
                stats["links_skipped_unusable_title"] += 1
                continue
            dictionary.set(mention, entity)
        yield sentence, dictionary.match(sentence)


@dataclass
class CandidateDescription:
    """An (entity pair, sentence) record with its oriented core path."""

    entity_a: str
    entity_b: str
    doc_id: str
    sent_idx: int
    sentence_text: str
    tokens: list[Token]
    span_a: MentionSpan
    span_b: MentionSpan
    core_path: DependencyPath
    relevance: float
    _tree: DepTree | None = field(default=None, repr=False, compare=False)

    def tree(self) -> DepTree:
        if self._tree is None:
            self._tree = DepTree(self.tokens)
        return self._tree

    def pattern(self) -> tuple[str, ...]:
        return core_pattern(self.core_path)

    def subject_entity(self) -> str:
        """Endpoint whose mention starts the (subject-normalized) core path."""
        return self.entity_a if self.core_path.start in self.span_a.indices() else self.entity_b

    def sort_key(self) -> tuple[str, int, str, str]:
        return (self.doc_id, self.sent_idx, self.entity_a, self.entity_b)


class FilterResult(NamedTuple):
    accepted: bool
    reason: str | None


def filter_candidate(candidate: CandidateDescription) -> FilterResult:
    """Length, noun-phrase completeness and subject-pattern gate.

    Reject reasons: ``too_short``, ``too_long``, ``incomplete_noun_phrase``,
    ``non_subject_pattern``.
    """
    n = len(candidate.tokens)
    if n < MIN_TOKENS:
        return FilterResult(False, "too_short")
    if n > MAX_TOKENS:
        return FilterResult(False, "too_long")
    tree = candidate.tree()
    if not compound_complete(tree, candidate.span_a) or not compound_complete(tree, candidate.span_b):
        return FilterResult(False, "incomplete_noun_phrase")
    pattern = candidate.pattern()
    if not pattern or pattern[0] not in ("i_nsubj", "i_nsubjpass"):
        return FilterResult(False, "non_subject_pattern")
    return FilterResult(True, None)


def _closest_span_pair(
    spans_a: list[MentionSpan], spans_b: list[MentionSpan]
) -> tuple[MentionSpan, MentionSpan]:
    """Span pair with the smallest token distance, then the leftmost one."""

    def key(pair: tuple[MentionSpan, MentionSpan]) -> tuple[int, int, int]:
        sa, sb = pair
        first, second = (sa, sb) if sa.start <= sb.start else (sb, sa)
        return (second.start - first.end, first.start, second.start)

    return min(((sa, sb) for sa in spans_a for sb in spans_b), key=key)


def extract_candidates(
    doc: Document,
    title_index: TitleIndex,
    embeddings: EmbeddingStore,
    stats: Counter | None = None,
) -> list[CandidateDescription]:
    """Unfiltered candidates for every entity co-occurrence in one document."""
    stats = stats if stats is not None else Counter()
    out: list[CandidateDescription] = []
    for sentence, occurrences in scan_document(doc, title_index, embeddings, stats):
        if len(occurrences) < 2:
            continue
        by_entity: dict[str, list[MentionSpan]] = {}
        for span in occurrences:
            by_entity.setdefault(span.entity, []).append(span)
        tree = sentence.tree()
        for entity_a, entity_b in combinations(sorted(by_entity), 2):
            span_a, span_b = _closest_span_pair(by_entity[entity_a], by_entity[entity_b])
            if span_a.overlaps(span_b):
                stats["candidates_rejected_overlapping_spans"] += 1
                continue
            relevance = embeddings.relevance(entity_a, entity_b)
            if relevance is None:
                stats["candidates_rejected_relevance_miss"] += 1
                continue
            head_a = mention_head(tree, span_a)
            head_b = mention_head(tree, span_b)
            path = core_path(tree, head_a, head_b)
            normalized = normalize_subject_first(path, core_pattern(path))
            out.append(
                CandidateDescription(
                    entity_a=entity_a,
                    entity_b=entity_b,
                    doc_id=doc.doc_id,
                    sent_idx=sentence.sent_idx,
                    sentence_text=sentence.text,
                    tokens=sentence.tokens,
                    span_a=span_a,
                    span_b=span_b,
                    core_path=normalized.path,
                    relevance=relevance,
                    _tree=tree,
                )
            )
    return out


def ingest_document(
    doc: Document,
    title_index: TitleIndex,
    embeddings: EmbeddingStore,
    stats: Counter | None = None,
) -> list[CandidateDescription]:
    """Candidates of one document that pass every filter, in scan order."""
    stats = stats if stats is not None else Counter()
    accepted = []
    for candidate in extract_candidates(doc, title_index, embeddings, stats):
        ok, reason = filter_candidate(candidate)
        if ok:
            stats["candidates_accepted"] += 1
            accepted.append(candidate)
        else:
            stats[f"candidates_rejected_{reason}"] += 1
    return accepted


# ---------------------------------------------------------------------------
# corpus / candidate serialization


def _parse_token(obj: dict, where: str) -> Token:
    try:
        return Token(index=obj["i"], text=obj["text"], head=obj["head"], deprel=obj["deprel"])
    except (KeyError, TypeError) as exc:
        raise CorpusFormatError(f"{where}: bad token record: {exc}") from exc


def _parse_document(obj: dict, where: str) -> Document:
    try:
        doc_id = obj["doc_id"]
        title = obj["title"]
        raw_sentences = obj["sentences"]
    except (KeyError, TypeError) as exc:
        raise CorpusFormatError(f"{where}: missing document field: {exc}") from exc
    sentences = []
    for idx, raw in enumerate(raw_sentences):
        tokens = [_parse_token(t, f"{where} sent {idx}") for t in raw.get("tokens", [])]
        for tok in tokens:
            if not tok.text or any(ch.isspace() for ch in tok.text):
                raise CorpusFormatError(
                    f"{where} sent {idx}: token {tok.index} text {tok.text!r} is empty or has whitespace"
                )
        links = []
        for raw_link in raw.get("links", []):
            link = Link(start=raw_link["start"], end=raw_link["end"], target=raw_link["target"])
            if not 1 <= link.start <= link.end <= len(tokens):
                raise CorpusFormatError(f"{where} sent {idx}: link span {link} out of range")
            links.append(link)
        sentence = ParsedSentence(doc_id=doc_id, sent_idx=idx, tokens=tokens, links=links)
        try:
            sentence.tree()  # validates the arc structure up front
        except ValueError as exc:
            raise CorpusFormatError(f"{where} sent {idx}: {exc}") from exc
        sentences.append(sentence)
    return Document(doc_id=doc_id, title=title, sentences=sentences)


def read_corpus(path: str | Path) -> Iterator[Document]:
    """Documents of a JSON Lines corpus file, validated one line at a time."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            yield _parse_document(obj, f"{path}:{lineno}")


def candidate_to_json(c: CandidateDescription) -> str:
    """One JSON line per candidate, fields in the documented order."""
    obj = {
        "entity_a": c.entity_a,
        "entity_b": c.entity_b,
        "doc_id": c.doc_id,
        "sent_idx": c.sent_idx,
        "sentence_text": c.sentence_text,
        "tokens": [{"i": t.index, "text": t.text, "head": t.head, "deprel": t.deprel} for t in c.tokens],
        "span_a": {"start": c.span_a.start, "end": c.span_a.end},
        "span_b": {"start": c.span_b.start, "end": c.span_b.end},
        "core_path": {
            "start": c.core_path.start,
            "steps": [{"deprel": s.deprel, "inverse": s.inverse, "token": s.token} for s in c.core_path.steps],
        },
        "relevance": c.relevance,
    }
    return json.dumps(obj, ensure_ascii=False)


def candidate_from_json(line: str) -> CandidateDescription:
    obj = json.loads(line)
    tokens = [_parse_token(t, "candidate") for t in obj["tokens"]]
    path = DependencyPath(
        start=obj["core_path"]["start"],
        steps=tuple(PathStep(s["deprel"], s["inverse"], s["token"]) for s in obj["core_path"]["steps"]),
    )
    return CandidateDescription(
        entity_a=obj["entity_a"],
        entity_b=obj["entity_b"],
        doc_id=obj["doc_id"],
        sent_idx=obj["sent_idx"],
        sentence_text=obj["sentence_text"],
        tokens=tokens,
        span_a=MentionSpan(obj["span_a"]["start"], obj["span_a"]["end"], obj["entity_a"]),
        span_b=MentionSpan(obj["span_b"]["start"], obj["span_b"]["end"], obj["entity_b"]),
        core_path=path,
        relevance=obj["relevance"],
    )
