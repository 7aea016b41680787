"""Per-token features for the tagger.

Each token row concatenates three blocks: a word-embedding block (plus an
out-of-vocabulary indicator), a syntactic block (case, token kind, digit
pattern, length, coarse POS, suffixes), and an optional Brown-cluster
block. Rows depend only on the token itself; sentence context is the
convolution layer's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingTable
from .errors import ConfigMismatch, ParseError
from .resources import read_lines
from .tokenizer import Token, TokenKind

POS_TAGS = (
    "DET", "PRON", "PREP", "CONJ", "AUX", "VERB",
    "NOUN", "ADJ", "ADV", "NUMW", "PUNCT", "OTHER",
)

_KINDS = (
    TokenKind.WORD,
    TokenKind.NUMBER,
    TokenKind.PERCENT_SIGN,
    TokenKind.PUNCTUATION,
    TokenKind.ABBREVIATION,
    TokenKind.SPECIAL_PHRASE,
)

# case(3) + kind(6) + digits(4) + length(4) + pos(12) + suffix(4)
SYNTACTIC_WIDTH = 3 + len(_KINDS) + 4 + 4 + len(POS_TAGS) + 4

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ity", "ance", "ence", "ism")
_ADJ_SUFFIXES = ("ous", "ful", "able", "ible", "ive", "ical")


@lru_cache(maxsize=1)
def _pos_lexicon() -> dict[str, str]:
    table = {}
    for line in read_lines("lexicons", "pos_lexicon.txt"):
        word, tag = line.split("\t")
        table[word] = tag
    return table


def coarse_pos(token: Token) -> str:
    """Coarse POS from the closed-class lexicon plus suffix heuristics."""
    if token.kind is TokenKind.NUMBER:
        return "NUMW"
    if token.kind in (TokenKind.PERCENT_SIGN, TokenKind.PUNCTUATION):
        return "PUNCT"
    tag = _pos_lexicon().get(token.lower)
    if tag:
        return tag
    w = token.lower
    if w.endswith("ly"):
        return "ADV"
    if w.endswith("ing") or w.endswith("ed"):
        return "VERB"
    if any(w.endswith(s) for s in _NOUN_SUFFIXES):
        return "NOUN"
    if any(w.endswith(s) for s in _ADJ_SUFFIXES):
        return "ADJ"
    if token.kind in (TokenKind.WORD, TokenKind.ABBREVIATION, TokenKind.SPECIAL_PHRASE):
        return "NOUN"
    return "OTHER"


@dataclass(frozen=True)
class FeatureConfig:
    """Declared block widths; total width must match what featurize produces."""

    embedding_dim: int = 50
    cluster_bits: int = 0  # 0 = Brown clusters absent

    @property
    def blocks(self) -> tuple[tuple[str, int], ...]:
        out = [("embedding", self.embedding_dim), ("oov", 1), ("syntactic", SYNTACTIC_WIDTH)]
        if self.cluster_bits:
            out.append(("cluster", self.cluster_bits + 1))
        return tuple(out)

    @property
    def width(self) -> int:
        return sum(w for _, w in self.blocks)

    def to_dict(self) -> dict:
        return {"embedding_dim": self.embedding_dim, "cluster_bits": self.cluster_bits}

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        return cls(embedding_dim=int(d["embedding_dim"]), cluster_bits=int(d["cluster_bits"]))


@dataclass
class FeatureMatrix:
    values: np.ndarray  # (tokens, width) float64
    blocks: tuple[tuple[str, int], ...] = field(default_factory=tuple)

    @property
    def width(self) -> int:
        return int(self.values.shape[1])


def load_clusters(path: str | Path) -> dict[str, str]:
    """Brown clusters: word TAB bitstring per line."""
    path = Path(path)
    table: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or set(parts[1]) - {"0", "1"}:
            raise ParseError(f"{path}:{lineno}: expected 'word<TAB>bitstring'")
        table[parts[0].lower()] = parts[1]
    return table


def _syntactic_row(token: Token) -> np.ndarray:
    row = np.zeros(SYNTACTIC_WIDTH)
    text = token.text
    i = 0
    row[i + 0] = float(text.islower())
    row[i + 1] = float(text.isupper())
    row[i + 2] = float(text.istitle())
    i += 3
    row[i + _KINDS.index(token.kind)] = 1.0
    i += len(_KINDS)
    row[i + 0] = float(any(c.isdigit() for c in text))
    row[i + 1] = float(text.isdigit())
    row[i + 2] = float("." in text and any(c.isdigit() for c in text))
    row[i + 3] = float("," in text and any(c.isdigit() for c in text))
    i += 4
    n = len(text)
    row[i + 0] = float(n == 1)
    row[i + 1] = float(2 <= n <= 4)
    row[i + 2] = float(5 <= n <= 8)
    row[i + 3] = float(n > 8)
    i += 4
    row[i + POS_TAGS.index(coarse_pos(token))] = 1.0
    i += len(POS_TAGS)
    w = token.lower
    row[i + 0] = float(w.endswith("ly"))
    row[i + 1] = float(w.endswith("ing"))
    row[i + 2] = float(w.endswith("ed"))
    row[i + 3] = float(w.endswith("s"))
    return row


def featurize(
    tokens: list[Token],
    config: FeatureConfig,
    embeddings: EmbeddingTable,
    clusters: dict[str, str] | None = None,
) -> FeatureMatrix:
    """Build the (tokens x width) feature matrix for one sentence."""
    if embeddings.dim != config.embedding_dim:
        raise ConfigMismatch(
            f"embedding table dim {embeddings.dim} != configured {config.embedding_dim}"
        )
    if config.cluster_bits and clusters is None:
        raise ConfigMismatch("config declares a cluster block but no clusters were given")

    rows = []
    for tok in tokens:
        vec = embeddings.vector(tok.lower)
        emb = np.zeros(config.embedding_dim) if vec is None else vec
        oov = np.array([1.0 if vec is None else 0.0])
        parts = [emb, oov, _syntactic_row(tok)]
        if config.cluster_bits:
            bits = np.zeros(config.cluster_bits + 1)
            bitstring = (clusters or {}).get(tok.lower)
            if bitstring is not None:
                bits[0] = 1.0
                for j, ch in enumerate(bitstring[: config.cluster_bits]):
                    bits[j + 1] = float(ch == "1")
            parts.append(bits)
        rows.append(np.concatenate(parts))

    values = np.vstack(rows) if rows else np.zeros((0, config.width))
    if values.shape[1] != config.width:
        raise ConfigMismatch(
            f"produced width {values.shape[1]} != declared {config.width}"
        )
    if not np.isfinite(values).all():
        raise ConfigMismatch("feature matrix contains non-finite values")
    return FeatureMatrix(values=values, blocks=config.blocks)
