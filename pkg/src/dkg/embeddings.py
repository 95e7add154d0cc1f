"""Entity embedding store with cosine-similarity relevance lookup.

The on-disk format is plain UTF-8 text, one entity per line:
``title<TAB>v1 v2 ... vd``.  A note on exporting real pretrained tables to
this format ships in the README.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = ["EmbeddingStore", "EmbeddingFormatError"]


class EmbeddingFormatError(ValueError):
    """Raised when an embedding file violates the one-dimension-per-store rule."""


class EmbeddingStore:
    """Read-only map from entity title to a dense vector of fixed dimension."""

    def __init__(self, vectors: dict[str, np.ndarray] | None = None):
        self._vectors: dict[str, np.ndarray] = {}
        self.dim: int | None = None
        self.duplicates = 0
        if vectors:
            for title, vec in vectors.items():
                self.add(title, vec)

    def add(self, title: str, vector: Iterable[float]) -> None:
        vec = np.asarray(list(vector), dtype=np.float64)
        if self.dim is None:
            self.dim = vec.shape[0]
        elif vec.shape[0] != self.dim:
            raise EmbeddingFormatError(
                f"entity {title!r}: dimension {vec.shape[0]} != store dimension {self.dim}"
            )
        if title in self._vectors:
            self.duplicates += 1
        self._vectors[title] = vec

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingStore":
        """Load a store from the text format; duplicate titles keep the last row."""
        store = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    title, values = line.split("\t", 1)
                    vec = [float(v) for v in values.split()]
                except ValueError as exc:
                    raise EmbeddingFormatError(f"{path}:{lineno}: malformed row: {exc}") from exc
                try:
                    store.add(title, vec)
                except EmbeddingFormatError as exc:
                    raise EmbeddingFormatError(f"{path}:{lineno}: {exc}") from exc
        return store

    def __contains__(self, title: str) -> bool:
        return title in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def titles(self) -> set[str]:
        return set(self._vectors)

    def vector(self, title: str) -> np.ndarray | None:
        return self._vectors.get(title)

    def relevance(self, a: str, b: str) -> float | None:
        """Cosine similarity of two entities, or ``None`` on any miss.

        A title absent from the store and a zero vector (undefined cosine)
        both count as misses.
        """
        va = self._vectors.get(a)
        vb = self._vectors.get(b)
        if va is None or vb is None:
            return None
        na = float(np.linalg.norm(va))
        nb = float(np.linalg.norm(vb))
        if na == 0.0 or nb == 0.0:
            return None
        return float(np.dot(va, vb) / (na * nb))
