from __future__ import annotations

import random

import pytest

from dkg.embeddings import EmbeddingFormatError, EmbeddingStore


def write_store(tmp_path, rows):
    path = tmp_path / "emb.tsv"
    path.write_text("".join(f"{t}\t{' '.join(map(str, v))}\n" for t, v in rows), encoding="utf-8")
    return path


class TestLoad:
    def test_two_rows(self, tmp_path):
        store = EmbeddingStore.load(write_store(tmp_path, [("A", [1, 0, 0]), ("B", [0, 1, 0])]))
        assert len(store) == 2
        assert store.dim == 3

    def test_empty_file(self, tmp_path):
        store = EmbeddingStore.load(write_store(tmp_path, []))
        assert len(store) == 0
        assert store.relevance("A", "B") is None

    def test_dimension_mismatch_names_row(self, tmp_path):
        path = write_store(tmp_path, [("A", [1, 0, 0]), ("B", [1, 0, 0, 0])])
        with pytest.raises(EmbeddingFormatError, match="B"):
            EmbeddingStore.load(path)

    def test_duplicate_title_last_wins(self, tmp_path):
        store = EmbeddingStore.load(write_store(tmp_path, [("A", [1, 0]), ("A", [0, 1])]))
        assert store.duplicates == 1
        assert list(store.vector("A")) == [0, 1]

    def test_malformed_value_rejected(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("A\t1.0 oops\n", encoding="utf-8")
        with pytest.raises(EmbeddingFormatError, match=":1"):
            EmbeddingStore.load(path)


class TestRelevance:
    def test_identical_vectors(self):
        store = EmbeddingStore({"A": [1, 2, 3], "B": [1, 2, 3]})
        assert store.relevance("A", "B") == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_vectors(self):
        store = EmbeddingStore({"A": [1, 0], "B": [0, 1]})
        assert store.relevance("A", "B") == 0.0

    def test_hand_computed_cosine(self):
        # dot = 2 + 2 + 4 = 8; norms are both 3
        store = EmbeddingStore({"A": [1, 2, 2], "B": [2, 1, 2]})
        assert store.relevance("A", "B") == pytest.approx(8 / 9, abs=1e-12)

    def test_missing_title_is_miss(self):
        store = EmbeddingStore({"A": [1, 0]})
        assert store.relevance("A", "missing") is None

    def test_zero_vector_is_miss(self):
        store = EmbeddingStore({"A": [0, 0], "B": [1, 0]})
        assert store.relevance("A", "B") is None

    def test_symmetry_is_exact(self):
        rng = random.Random(5)
        store = EmbeddingStore(
            {f"E{i}": [rng.uniform(-1, 1) for _ in range(8)] for i in range(20)}
        )
        titles = sorted(store.titles())
        for a in titles:
            for b in titles:
                assert store.relevance(a, b) == store.relevance(b, a)

    def test_self_relevance_is_one(self):
        rng = random.Random(6)
        store = EmbeddingStore({f"E{i}": [rng.uniform(-2, 2) for _ in range(5)] for i in range(50)})
        for title in store.titles():
            assert abs(store.relevance(title, title) - 1.0) <= 1e-9
