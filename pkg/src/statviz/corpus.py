"""Annotated corpus: CoNLL-style loading, splits, and entity-level scoring.

File format: one ``token<TAB>label`` pair per line, blank line between
sentences. Labels are IOB over the four entity types M/N/P/W.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .crf import LABELS, is_valid_iob
from .errors import ParseError

ENTITY_TYPES = ("M", "N", "P", "W")
ENTITY_NAMES = {"M": "modifier", "N": "number", "P": "part", "W": "whole"}


@dataclass(frozen=True)
class AnnotatedSentence:
    tokens: tuple[str, ...]
    labels: tuple[str, ...]

    @property
    def text(self) -> str:
        return detokenize(self.tokens)


@dataclass
class AnnotatedCorpus:
    sentences: list[AnnotatedSentence]

    def __len__(self) -> int:
        return len(self.sentences)

    def split(self, heldout_fraction: float = 0.2, seed: int = 13):
        """Deterministic shuffle split into (train, heldout), disjoint."""
        import numpy as np

        order = np.random.default_rng(seed).permutation(len(self.sentences))
        n_held = int(round(len(self.sentences) * heldout_fraction))
        held_idx = set(order[:n_held].tolist())
        train = [s for i, s in enumerate(self.sentences) if i not in held_idx]
        held = [s for i, s in enumerate(self.sentences) if i in held_idx]
        return AnnotatedCorpus(train), AnnotatedCorpus(held)

    def folds(self, k: int = 10, seed: int = 13):
        """Yield (train, heldout) pairs for k-fold cross-validation."""
        import numpy as np

        order = np.random.default_rng(seed).permutation(len(self.sentences)).tolist()
        for f in range(k):
            held_idx = set(order[f::k])
            train = [s for i, s in enumerate(self.sentences) if i not in held_idx]
            held = [s for i, s in enumerate(self.sentences) if i in held_idx]
            yield AnnotatedCorpus(train), AnnotatedCorpus(held)


_NO_SPACE_BEFORE = {"%", ".", ",", ";", ":", "!", "?", ")", "/", "'s"}
_NO_SPACE_AFTER = {"(", "/"}


def detokenize(tokens: tuple[str, ...] | list[str]) -> str:
    """Join tokens with spaces, closing up punctuation, %, and fraction slashes."""
    out: list[str] = []
    for i, tok in enumerate(tokens):
        if i > 0 and tok not in _NO_SPACE_BEFORE and out[-1] not in _NO_SPACE_AFTER:
            out.append(" ")
        out.append(tok)
    return "".join(out)


def load_corpus(path: str | Path) -> AnnotatedCorpus:
    path = Path(path)
    sentences: list[AnnotatedSentence] = []
    tokens: list[str] = []
    labels: list[str] = []

    def flush(lineno: int) -> None:
        if not tokens:
            return
        if not is_valid_iob(labels):
            raise ParseError(f"{path}:{lineno}: invalid IOB sequence {labels}")
        if "B-N" not in labels:
            raise ParseError(f"{path}:{lineno}: sentence has no number entity")
        sentences.append(AnnotatedSentence(tuple(tokens), tuple(labels)))
        tokens.clear()
        labels.clear()

    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#") and "\t" not in line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'token<TAB>label': {line!r}")
            tok, lab = parts
            if lab not in LABELS:
                raise ParseError(f"{path}:{lineno}: unknown label {lab!r}")
            tokens.append(tok)
            labels.append(lab)
    flush(lineno if "lineno" in dir() else 0)
    if not sentences:
        raise ParseError(f"{path}: empty corpus")
    return AnnotatedCorpus(sentences)


def save_corpus(corpus: AnnotatedCorpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for sent in corpus.sentences:
            for tok, lab in zip(sent.tokens, sent.labels):
                fh.write(f"{tok}\t{lab}\n")
            fh.write("\n")


def entity_spans(labels: tuple[str, ...] | list[str]) -> list[tuple[int, int, str]]:
    """(start, end_exclusive, type) token spans of a valid IOB sequence."""
    spans = []
    start, ent = None, None
    for i, lab in enumerate(labels):
        if lab.startswith("B-"):
            if start is not None:
                spans.append((start, i, ent))
            start, ent = i, lab[2:]
        elif lab.startswith("I-"):
            continue  # extends the open span (input is valid IOB)
        else:
            if start is not None:
                spans.append((start, i, ent))
            start, ent = None, None
    if start is not None:
        spans.append((start, len(labels), ent))
    return spans


@dataclass(frozen=True)
class EntityScore:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int


def score_predictions(
    gold: list[tuple[str, ...]], predicted: list[tuple[str, ...]]
) -> dict[str, EntityScore]:
    """Entity-level exact span+type match, per entity type.

    Zero-denominator precision/recall are defined as 0.
    """
    counts = {t: [0, 0, 0] for t in ENTITY_TYPES}  # tp, fp, fn
    for g_labels, p_labels in zip(gold, predicted):
        g = set(entity_spans(g_labels))
        p = set(entity_spans(p_labels))
        for span in g & p:
            counts[span[2]][0] += 1
        for span in p - g:
            counts[span[2]][1] += 1
        for span in g - p:
            counts[span[2]][2] += 1
    out = {}
    for t, (tp, fp, fn) in counts.items():
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        out[t] = EntityScore(prec, rec, f1, tp, fp, fn)
    return out


def mean_f1(scores: dict[str, EntityScore]) -> float:
    return sum(s.f1 for s in scores.values()) / len(scores)
