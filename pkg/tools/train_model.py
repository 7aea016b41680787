#!/usr/bin/env python3
"""Train and bundle the default tagger model.

Trains on the full bundled corpus (with an internal early-stop split),
saves the model next to the corpus, and asserts a few known decodes so a
bad model never ships.

Usage: python3 tools/train_model.py [out_path]
"""

from __future__ import annotations

import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))

from statviz.analyzer import Tagger, evaluate, train  # noqa: E402
from statviz.corpus import ENTITY_NAMES, load_corpus  # noqa: E402
from statviz.embeddings import load_embeddings  # noqa: E402
from statviz.features import FeatureConfig  # noqa: E402
from statviz.resources import data_path  # noqa: E402

REGRESSIONS = [
    (
        "More than 40% of students like football.",
        ("B-M", "I-M", "B-N", "I-N", "O", "B-W", "B-P", "I-P", "O"),
    ),
    (
        "Less than 1% of US men know how to tie a bow tie.",
        ("B-M", "I-M", "B-N", "I-N", "O", "B-W", "I-W",
         "B-P", "I-P", "I-P", "I-P", "I-P", "I-P", "I-P", "O"),
    ),
    (
        "65% of coffee are consumed in breakfast.",
        ("B-N", "I-N", "O", "B-W", "B-P", "I-P", "I-P", "I-P", "O"),
    ),
]


def main(out_path: str) -> None:
    corpus = load_corpus(data_path("corpus.conll"))
    emb = load_embeddings(data_path("embeddings_50d.txt"))
    config = FeatureConfig(embedding_dim=50)
    train_part, held = corpus.split(heldout_fraction=0.1, seed=7)

    model, report = train(
        train_part, config, emb, heldout=held,
        kernel_count=32, max_epochs=240, seed=0, step=0.5,
    )
    print(f"trained {report.epochs_run} epochs, final loss {report.losses[-1]:.4f}")

    scores = evaluate(model, corpus, emb)
    for t, s in scores.items():
        print(f"{ENTITY_NAMES[t]:10s} P={s.precision:.3f} R={s.recall:.3f} F1={s.f1:.3f}")

    tagger = Tagger(model, emb)
    for statement, gold in REGRESSIONS:
        got = tagger.tag(statement).sequence.labels
        assert got == gold, f"{statement!r}: {got} != {gold}"
        print("ok:", statement)

    model.save(out_path)
    print("saved", out_path)


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(SRC / "statviz" / "data" / "model.txt")
    main(out)
