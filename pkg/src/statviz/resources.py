"""Access to bundled data files (lexicons, corpus, assets, fonts, blueprints)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Absolute path of a bundled data file, e.g. data_path('lexicons', 'verbs.txt')."""
    root = resources.files("statviz").joinpath("data")
    p = Path(str(root))
    for part in parts:
        p = p / part
    return p


def read_lines(*parts: str) -> list[str]:
    """Non-empty, non-comment lines of a bundled text file."""
    text = data_path(*parts).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def read_word_set(*parts: str) -> frozenset[str]:
    return frozenset(w.lower() for w in read_lines(*parts))
