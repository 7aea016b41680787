#!/usr/bin/env python3
"""Generate the bundled font metric tables (glyph advance widths per 1000 units).

Three families with different compactness share one base table; narrow
and slab variants scale every advance. Metric-only fonts keep layout
deterministic across machines; rendered SVGs name real fallback stacks.

Usage: python3 tools/gen_fonts.py [fonts_dir]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"

# Helvetica-like advance widths, units per 1000/em
BASE = {
    " ": 278, "!": 278, '"': 355, "#": 556, "$": 556, "%": 889, "&": 667,
    "'": 191, "(": 333, ")": 333, "*": 389, "+": 584, ",": 278, "-": 333,
    ".": 278, "/": 278, "0": 556, "1": 556, "2": 556, "3": 556, "4": 556,
    "5": 556, "6": 556, "7": 556, "8": 556, "9": 556, ":": 278, ";": 278,
    "<": 584, "=": 584, ">": 584, "?": 556, "@": 1015, "A": 667, "B": 667,
    "C": 722, "D": 722, "E": 667, "F": 611, "G": 778, "H": 722, "I": 278,
    "J": 500, "K": 667, "L": 556, "M": 833, "N": 722, "O": 778, "P": 667,
    "Q": 778, "R": 722, "S": 667, "T": 611, "U": 722, "V": 667, "W": 944,
    "X": 667, "Y": 667, "Z": 611, "[": 278, "\\": 278, "]": 278, "^": 469,
    "_": 556, "`": 333, "a": 556, "b": 556, "c": 500, "d": 556, "e": 556,
    "f": 278, "g": 556, "h": 556, "i": 222, "j": 222, "k": 500, "l": 222,
    "m": 833, "n": 556, "o": 556, "p": 556, "q": 556, "r": 333, "s": 500,
    "t": 278, "u": 556, "v": 500, "w": 722, "x": 500, "y": 500, "z": 500,
    "{": 334, "|": 260, "}": 334, "~": 584,
}

FAMILIES = [
    ("Metric Sans", 1.0, 1.25, "Helvetica, Arial, sans-serif"),
    ("Metric Narrow", 0.82, 1.18, "'Arial Narrow', 'Helvetica Neue', sans-serif"),
    ("Metric Slab", 1.08, 1.32, "Georgia, 'Times New Roman', serif"),
]


def main(fonts_dir: str) -> None:
    out_dir = Path(fonts_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for family, scale, line_height, fallback in FAMILIES:
        table = {
            "family": family,
            "fallback": fallback,
            "line_height": line_height,
            "default_advance": round(BASE["x"] * scale),
            "advance": {ch: round(adv * scale) for ch, adv in BASE.items()},
        }
        slug = family.lower().replace(" ", "_")
        (out_dir / f"{slug}.json").write_text(
            json.dumps(table, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote {slug}.json ({len(BASE)} glyphs, scale {scale})")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else str(SRC / "statviz" / "data" / "fonts"))
