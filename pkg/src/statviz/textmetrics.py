"""Font metric tables and minimum-raggedness line breaking.

Widths come from bundled per-glyph advance tables (units per 1000/em),
so text measurement is identical on every machine. Line breaking is a
dynamic program over candidate longest-line widths: raggedness is the
sum over lines of (longest line width - line width)^2, and the returned
breaking attains the exact minimum for the requested line count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import ParseError, TooManyLines
from .resources import data_path


@dataclass(frozen=True)
class FontMetrics:
    family: str
    fallback: str
    line_height: float  # em multiple
    default_advance: int
    advance: dict[str, int]  # glyph -> units per 1000/em

    def char_width(self, ch: str, size: float = 1.0) -> float:
        return self.advance.get(ch, self.default_advance) / 1000.0 * size

    def text_width(self, text: str, size: float = 1.0) -> float:
        units = sum(self.advance.get(ch, self.default_advance) for ch in text)
        return units / 1000.0 * size

    def css_stack(self) -> str:
        return f"'{self.family}', {self.fallback}"


def load_font(path: str | Path) -> FontMetrics:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        return FontMetrics(
            family=raw["family"],
            fallback=raw.get("fallback", "sans-serif"),
            line_height=float(raw["line_height"]),
            default_advance=int(raw["default_advance"]),
            advance={k: int(v) for k, v in raw["advance"].items()},
        )
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: bad font table ({exc})") from exc


@lru_cache(maxsize=1)
def bundled_fonts() -> dict[str, FontMetrics]:
    fonts = {}
    for path in sorted(data_path("fonts").glob("*.json")):
        font = load_font(path)
        fonts[font.family] = font
    if not fonts:
        raise ParseError("no bundled font tables found")
    return fonts


@dataclass(frozen=True)
class LineBreaking:
    words: tuple[str, ...]
    lines: tuple[tuple[int, int], ...]  # word-index ranges, end exclusive
    widths: tuple[float, ...]  # at unit font size
    max_width: float
    cost: float  # sum of (max_width - width)^2
    line_height: float

    @property
    def line_count(self) -> int:
        return len(self.lines)

    @property
    def height(self) -> float:
        return self.line_count * self.line_height

    @property
    def aspect(self) -> float:
        return self.max_width / self.height

    def texts(self) -> list[str]:
        return [" ".join(self.words[a:b]) for a, b in self.lines]


def _run_widths(word_widths: list[float], space: float) -> np.ndarray:
    """width[i, j] of words i..j-1 joined by spaces (inf where i >= j)."""
    n = len(word_widths)
    prefix = np.concatenate(([0.0], np.cumsum(word_widths)))
    i = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    width = prefix[j] - prefix[i] + space * (j - i - 1)
    return np.where(j > i, width, np.inf)


def break_lines(text: str, font: FontMetrics, line_count: int) -> LineBreaking:
    """Optimal minimum-raggedness breaking of ``text`` into exactly
    ``line_count`` lines (breaks at spaces only)."""
    words = tuple(text.split())
    n = len(words)
    if line_count < 1 or line_count > n:
        raise TooManyLines(f"cannot break {n} words into {line_count} lines")

    word_widths = [font.text_width(w) for w in words]
    space = font.char_width(" ")
    if line_count == 1:
        total = float(sum(word_widths) + space * (n - 1))
        return LineBreaking(words, ((0, n),), (total,), total, 0.0, font.line_height)

    runs = _run_widths(word_widths, space)
    finite = runs[np.isfinite(runs)]
    candidates = np.unique(finite)

    best_cost, best_m = np.inf, None
    for m in candidates:
        cost_matrix = np.where(runs <= m + 1e-12, (m - runs) ** 2, np.inf)
        f = np.full(n + 1, np.inf)
        f[0] = 0.0
        for _ in range(line_count):
            f = np.min(f[:, None] + cost_matrix, axis=0)
        total = f[n]
        if total < best_cost - 1e-12:
            best_cost, best_m = total, m

    # recover the breaking for the winning candidate
    m = best_m
    cost_matrix = np.where(runs <= m + 1e-12, (m - runs) ** 2, np.inf)
    layers = [np.full(n + 1, np.inf)]
    layers[0][0] = 0.0
    argmins = []
    for _ in range(line_count):
        stacked = layers[-1][:, None] + cost_matrix
        argmins.append(np.argmin(stacked, axis=0))
        layers.append(np.min(stacked, axis=0))
    bounds = [n]
    for layer in range(line_count, 0, -1):
        bounds.append(int(argmins[layer - 1][bounds[-1]]))
    bounds.reverse()

    lines = tuple((bounds[k], bounds[k + 1]) for k in range(line_count))
    widths = tuple(float(runs[a, b]) for a, b in lines)
    max_width = max(widths)
    cost = float(sum((max_width - w) ** 2 for w in widths))
    return LineBreaking(words, lines, widths, max_width, cost, font.line_height)


def breaking_options(text: str, font: FontMetrics, max_lines: int = 10) -> list[LineBreaking]:
    """Optimal breakings for every line count from 1 to min(max_lines, words)."""
    n = len(text.split())
    return [break_lines(text, font, l) for l in range(1, min(max_lines, n) + 1)]
