"""Statement tagging facade: tokenizer + features + conv/CRF model.

Also hosts corpus-level training and evaluation so the CLI and tests
have one entry point for each.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import crf
from .corpus import AnnotatedCorpus, ENTITY_TYPES, EntityScore, mean_f1, score_predictions
from .crf import LABEL_INDEX, TaggerModel, TagSequence, TrainReport
from .embeddings import EmbeddingTable
from .features import FeatureConfig, featurize
from .tokenizer import Token, TokenKind, tokenize
from .tokenizer import _flag_special_phrases  # same phrase table as live tokenization


@dataclass(frozen=True)
class TaggedStatement:
    statement: str
    tokens: tuple[Token, ...]
    sequence: TagSequence

    def spans_of(self, entity: str) -> list[tuple[int, int]]:
        """Character spans (start, end) of every entity of the given type."""
        out = []
        start = None
        for tok, lab in zip(self.tokens, self.sequence.labels):
            if lab == f"B-{entity}":
                if start is not None:
                    out.append(start)
                start = (tok.char_start, tok.char_end)
            elif lab == f"I-{entity}" and start is not None:
                start = (start[0], tok.char_end)
            else:
                if start is not None:
                    out.append(start)
                start = None
        if start is not None:
            out.append(start)
        return out


_NUMBER_RE = re.compile(r"\d+(?:,\d{3})*(?:\.\d+)?$")
_ABBREV_RE = re.compile(r"(?:[A-Za-z]\.){2,}$")
_WORD_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)*$")


def tokens_from_strings(words: list[str] | tuple[str, ...]) -> list[Token]:
    """Rebuild Token objects for pre-tokenized corpus sentences.

    Offsets are synthesized (single spaces); kinds use the same
    classification as the live tokenizer.
    """
    toks = []
    pos = 0
    for w in words:
        if _ABBREV_RE.fullmatch(w):
            kind = TokenKind.ABBREVIATION
        elif _NUMBER_RE.fullmatch(w):
            kind = TokenKind.NUMBER
        elif _WORD_RE.fullmatch(w):
            kind = TokenKind.WORD
        elif w == "%":
            kind = TokenKind.PERCENT_SIGN
        else:
            kind = TokenKind.PUNCTUATION
        toks.append(Token(w, pos, pos + len(w), kind))
        pos += len(w) + 1
    return _flag_special_phrases(toks)


def gold_tagged_statement(sentence) -> TaggedStatement:
    """TaggedStatement from a corpus sentence's gold labels (no model)."""
    from .corpus import detokenize

    text = detokenize(sentence.tokens)
    tokens = tokenize(text)
    if len(tokens) != len(sentence.labels):
        raise ValueError(f"token/label length mismatch for {text!r}")
    seq = TagSequence(labels=tuple(sentence.labels), score=0.0)
    return TaggedStatement(text, tuple(tokens), seq)


class Tagger:
    """A loaded model plus the resources needed to featurize statements."""

    def __init__(
        self,
        model: TaggerModel,
        embeddings: EmbeddingTable,
        clusters: dict[str, str] | None = None,
    ):
        self.model = model
        self.embeddings = embeddings
        self.clusters = clusters

    def _features(self, tokens: list[Token]):
        return featurize(tokens, self.model.config, self.embeddings, self.clusters)

    def tag_tokens(self, tokens: list[Token], with_marginals: bool = False) -> TagSequence:
        return crf.tag(self.model, self._features(tokens), with_marginals)

    def tag(self, statement: str, with_marginals: bool = False) -> TaggedStatement:
        tokens = tokenize(statement)
        seq = self.tag_tokens(tokens, with_marginals)
        return TaggedStatement(statement, tuple(tokens), seq)


def _corpus_arrays(
    corpus: AnnotatedCorpus,
    config: FeatureConfig,
    embeddings: EmbeddingTable,
    clusters: dict[str, str] | None,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    xs, ys = [], []
    for sent in corpus.sentences:
        toks = tokens_from_strings(sent.tokens)
        xs.append(featurize(toks, config, embeddings, clusters).values)
        ys.append(np.array([LABEL_INDEX[lab] for lab in sent.labels], dtype=np.intp))
    return xs, ys


def train(
    corpus: AnnotatedCorpus,
    config: FeatureConfig,
    embeddings: EmbeddingTable,
    clusters: dict[str, str] | None = None,
    heldout: AnnotatedCorpus | None = None,
    **hyper,
) -> tuple[TaggerModel, TrainReport]:
    """Train on ``corpus``; early-stop on held-out mean entity F1 if given."""
    xs, ys = _corpus_arrays(corpus, config, embeddings, clusters)

    scorer = None
    if heldout is not None and len(heldout) > 0:
        held_x, _ = _corpus_arrays(heldout, config, embeddings, clusters)
        held_gold = [s.labels for s in heldout.sentences]

        def scorer(model: TaggerModel) -> float:
            preds = [crf.decode(model, x).labels for x in held_x]
            return mean_f1(score_predictions(held_gold, preds))

    return crf.train_model(xs, ys, config, heldout_scorer=scorer, **hyper)


def evaluate(
    model: TaggerModel,
    corpus: AnnotatedCorpus,
    embeddings: EmbeddingTable,
    clusters: dict[str, str] | None = None,
) -> dict[str, EntityScore]:
    """Entity-level P/R/F1 of the model's decodes against gold labels."""
    xs, _ = _corpus_arrays(corpus, model.config, embeddings, clusters)
    preds = [crf.decode(model, x).labels for x in xs]
    gold = [s.labels for s in corpus.sentences]
    return score_predictions(gold, preds)


def cross_validate(
    corpus: AnnotatedCorpus,
    config: FeatureConfig,
    embeddings: EmbeddingTable,
    clusters: dict[str, str] | None = None,
    k: int = 10,
    seed: int = 13,
    **hyper,
) -> list[dict[str, EntityScore]]:
    """k-fold cross-validation; returns one score dict per fold."""
    results = []
    for train_part, held in corpus.folds(k=k, seed=seed):
        model, _ = train(train_part, config, embeddings, clusters, **hyper)
        results.append(evaluate(model, held, embeddings, clusters))
    return results


def fold_means(results: list[dict[str, EntityScore]]) -> dict[str, float]:
    return {
        t: sum(r[t].f1 for r in results) / len(results) for t in ENTITY_TYPES
    }
