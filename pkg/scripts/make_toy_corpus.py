#!/usr/bin/env python3
"""Generate the bundled toy corpus and embedding table under tests/data/.

The corpus is built from three sentence templates with hand-specified arcs,
so pattern frequencies are known by construction (see EXPECTED at the
bottom).  Two boundary cases are planted on purpose: an entity pair whose
relevance is exactly 0.49 and a pair whose only sentence scores just below
the 0.6 edge threshold.
"""
from __future__ import annotations

import json
import math
from itertools import combinations
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parents[1] / "tests" / "data"

CLUSTER = ["Agate", "Basalt", "Coral", "Dolomite", "Epidote",
           "Flint", "Gypsum", "Halite", "Iolite", "Jasper"]

T1_VARIANTS = [("is", "a", "type", "of"), ("remains", "a", "part", "of"), ("is", "a", "form", "of")]


def tok(i, text, head, deprel):
    return {"i": i, "text": text, "head": head, "deprel": deprel}


def t1_sentence(x_words, y_words, variant, x_target=None, y_target=None):
    """"X is a type of Y ." — core pattern i_nsubj|attr|prep|pobj."""
    verb, det, noun, prep = variant
    tokens = []
    x_head = len(x_words)
    for i, w in enumerate(x_words, start=1):
        tokens.append(tok(i, w, x_head if i < x_head else x_head + 1, "compound" if i < x_head else "nsubj"))
    v = x_head + 1
    tokens.append(tok(v, verb, 0, "ROOT"))
    tokens.append(tok(v + 1, det, v + 2, "det"))
    tokens.append(tok(v + 2, noun, v, "attr"))
    tokens.append(tok(v + 3, prep, v + 2, "prep"))
    y_start = v + 4
    y_head = y_start + len(y_words) - 1
    for i, w in enumerate(y_words):
        idx = y_start + i
        tokens.append(tok(idx, w, y_head if idx < y_head else v + 3, "compound" if idx < y_head else "pobj"))
    tokens.append(tok(y_head + 1, ".", v, "punct"))
    links = []
    if x_target:
        links.append({"start": 1, "end": x_head, "target": x_target})
    if y_target:
        links.append({"start": y_start, "end": y_head, "target": y_target})
    return {"tokens": tokens, "links": links}


def t2_sentence(x, y, x_target=None, y_target=None, junk=None):
    """"X relies on Y usually ." — core pattern i_nsubj|prep|pobj.

    With ``junk`` words the adverb is replaced by dep-attached tokens that
    are irrelevant to the relation, dragging significance down.
    """
    tokens = [
        tok(1, x, 2, "nsubj"),
        tok(2, "relies", 0, "ROOT"),
        tok(3, "on", 2, "prep"),
        tok(4, y, 3, "pobj"),
    ]
    if junk:
        for offset, w in enumerate(junk):
            tokens.append(tok(5 + offset, w, 2, "dep"))
        tokens.append(tok(5 + len(junk), ".", 2, "punct"))
    else:
        tokens.append(tok(5, "usually", 2, "advmod"))
        tokens.append(tok(6, ".", 2, "punct"))
    links = []
    if x_target:
        links.append({"start": 1, "end": 1, "target": x_target})
    if y_target:
        links.append({"start": 4, "end": 4, "target": y_target})
    return {"tokens": tokens, "links": links}


def lead_sentence(words, link_token=None, link_target=None):
    """Simple 5-token filler "W1 W2 W3 W4 ." rooted at the second token."""
    tokens = [
        tok(1, words[0], 2, "nsubj"),
        tok(2, words[1], 0, "ROOT"),
        tok(3, words[2], 2, "dobj"),
        tok(4, words[3], 2, "advmod"),
        tok(5, ".", 2, "punct"),
    ]
    links = []
    if link_token:
        links.append({"start": link_token, "end": link_token, "target": link_target})
    return {"tokens": tokens, "links": links}


def build_corpus():
    docs = []
    serial = 0

    def add(title, sentences):
        nonlocal serial
        docs.append({"doc_id": f"doc{serial:03d}", "title": title, "sentences": sentences})
        serial += 1

    # 45 clique documents; consecutive pairs also carry an unlinked T2 sentence
    # whose mentions resolve through the dictionary built by sentence 0.
    for i, j in combinations(range(10), 2):
        x, y = CLUSTER[i], CLUSTER[j]
        sentences = [t1_sentence([x], [y], T1_VARIANTS[serial % 3], x_target=x, y_target=y)]
        if j == i + 1:
            sentences.append(t2_sentence(x, y))
        add(f"Survey of {x} and {y}", sentences)

    # parenthetical title + dictionary carry-over to a bare later mention
    add("Scripting notes", [
        lead_sentence(["This", "covers", "Python", "today"], link_token=3,
                      link_target="Python (programming language)"),
        t2_sentence("Python", "Programming", y_target="Programming"),
    ])
    # comma title: the crafted mention drops everything after the comma
    add("Twin cities", [
        t1_sentence(["Champaign"], ["Urbana"], T1_VARIANTS[1],
                    x_target="Champaign, Illinois", y_target="Urbana"),
    ])
    # same mention re-linked mid-document: later occurrences follow the newer link
    add("Mercury notes", [
        lead_sentence(["Astronomers", "study", "Mercury", "closely"], link_token=3,
                      link_target="Mercury (planet)"),
        t1_sentence(["Mercury"], ["Planetoid"], T1_VARIANTS[0], y_target="Planetoid"),
        lead_sentence(["Chemists", "prefer", "Mercury", "instead"], link_token=3,
                      link_target="Mercury (element)"),
        t1_sentence(["Mercury"], ["Reagent"], T1_VARIANTS[2], y_target="Reagent"),
    ])
    # lower-cased link target with a unique case-insensitive match
    add("Flint feature", [
        t1_sentence(["Flint"], ["Agate"], T1_VARIANTS[0], x_target="flint", y_target="Agate"),
    ])
    # lower-cased link target with two matches, settled by the page embedding
    add("Skywatch", [
        t1_sentence(["Mercury"], ["Telescopium"], T1_VARIANTS[0],
                    x_target="mercury", y_target="Telescopium"),
    ])
    # two-token mention whose internal compound arc stays inside the span
    add("Gem column", [
        t1_sentence(["Rose", "Quartz"], ["Agate"], T1_VARIANTS[0],
                    x_target="Rose Quartz", y_target="Agate"),
    ])
    # mention inside a larger compound: rejected as an incomplete noun phrase
    add("Gadget report", [
        {
            "tokens": [
                tok(1, "The", 3, "det"),
                tok(2, "quantum", 3, "compound"),
                tok(3, "Algorithmite", 4, "nsubj"),
                tok(4, "is", 0, "ROOT"),
                tok(5, "a", 6, "det"),
                tok(6, "type", 4, "attr"),
                tok(7, "of", 6, "prep"),
                tok(8, "Gadgetite", 7, "pobj"),
                tok(9, ".", 4, "punct"),
            ],
            "links": [
                {"start": 3, "end": 3, "target": "Algorithmite"},
                {"start": 8, "end": 8, "target": "Gadgetite"},
            ],
        }
    ])
    # relevance boundary: cos(Marble, Nephrite) = 0.49, below every 0.5 threshold
    add("Quarry report", [
        t1_sentence(["Marble"], ["Nephrite"], T1_VARIANTS[0], x_target="Marble", y_target="Nephrite"),
    ])
    # score boundary: rare pattern plus four irrelevant tokens, rd just below 0.6
    add("Mining gossip", [
        t2_sentence("Kunzite", "Lignite", x_target="Kunzite", y_target="Lignite",
                    junk=["say", "some", "critics", "anyway"]),
    ])
    return docs


def build_embeddings():
    rows = []
    direction = 0
    for name in CLUSTER + [
        "Rose Quartz", "Urbana", "Champaign, Illinois", "Planetoid", "Telescopium",
        "Programming", "Python (programming language)", "Kunzite", "Lignite",
        "Algorithmite", "Gadgetite", "Mercury (planet)",
    ]:
        rows.append((name, [1.0, direction * 1e-3, 0.0, 0.0]))
        direction += 1
    rows.append(("Mercury (element)", [0.0, 0.0, 0.0, 1.0]))
    rows.append(("Reagent", [0.001, 0.0, 0.0, 1.0]))
    rows.append(("Skywatch", [1.0, 0.0, 0.001, 0.0]))
    rows.append(("Marble", [1.0, 0.0, 0.0, 0.0]))
    rows.append(("Nephrite", [0.49, math.sqrt(1.0 - 0.49 ** 2), 0.0, 0.0]))
    return rows


# Frozen by construction: counting templates, not running the pipeline.
#   45 clique + champaign + 2 mercury + flint + skywatch + rose-quartz T1
#   candidates are counted (the 0.49-relevance pair is not), and 9 fillers +
#   python + boundary T2 candidates.
EXPECTED = {
    "core_counts": {"i_nsubj|attr|prep|pobj": 51, "i_nsubj|prep|pobj": 11},
    "sub_counts": {"det": 51, "punct": 62, "advmod": 10},
    "accepted_candidates": 63,
    "graph_nodes": 20,
    "graph_edges": 51,
    "mean_sentence_tokens": 7.0,
    "boundary_relevance_pair": ["Marble", "Nephrite"],
    "boundary_rd_pair": ["Kunzite", "Lignite"],
}


def boundary_rd():
    """Direct formula evaluation from the frozen counts."""
    exp = math.log(11 + 1) / math.log(51 + 1)
    sig = (4 * 1.0 + 4 * 0.0 + math.log(62 + 1) / math.log(62 + 1)) / 9
    return 2 * exp * sig / (exp + sig)


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    docs = build_corpus()
    with open(DATA_DIR / "toy_corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    with open(DATA_DIR / "toy_embeddings.tsv", "w", encoding="utf-8") as fh:
        for name, vec in build_embeddings():
            fh.write(name + "\t" + " ".join(repr(v) for v in vec) + "\n")
    expected = dict(EXPECTED, boundary_rd=round(boundary_rd(), 6))
    with open(DATA_DIR / "toy_expected.json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps(expected, indent=2) + "\n")
    print(f"wrote {len(docs)} documents, boundary rd = {boundary_rd():.6f}")


if __name__ == "__main__":
    main()
