"""Word-embedding table: loading and cosine similarity.

File format: one word per line, the word followed by its vector
components, space-separated. All vectors in one table share a dimension.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ParseError


class EmbeddingTable:
    def __init__(self, words: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or len(words) != matrix.shape[0]:
            raise ValueError("words/matrix shape mismatch")
        self.dim = int(matrix.shape[1])
        self._index = {w: i for i, w in enumerate(words)}
        norms = np.linalg.norm(matrix, axis=1)
        norms[norms == 0.0] = 1.0
        self._matrix = matrix
        self._unit = matrix / norms[:, None]

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._index

    def __len__(self) -> int:
        return len(self._index)

    def vector(self, word: str) -> np.ndarray | None:
        """Raw vector, or None for out-of-vocabulary words."""
        i = self._index.get(word.lower())
        return None if i is None else self._matrix[i]

    def similarity(self, a: str, b: str) -> float | None:
        """Cosine similarity, or None when either word is out of vocabulary."""
        ia = self._index.get(a.lower())
        ib = self._index.get(b.lower())
        if ia is None or ib is None:
            return None
        return float(np.dot(self._unit[ia], self._unit[ib]))


def load_embeddings(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    words: list[str] = []
    rows: list[np.ndarray] = []
    dim = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(f"{path}:{lineno}: expected 'word v1 v2 ...'")
            word, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise ParseError(
                    f"{path}:{lineno}: vector length {len(values)} != {dim}"
                )
            try:
                rows.append(np.array([float(v) for v in values], dtype=np.float64))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            words.append(word.lower())
    if not words:
        raise ParseError(f"{path}: empty embedding table")
    return EmbeddingTable(words, np.vstack(rows))
