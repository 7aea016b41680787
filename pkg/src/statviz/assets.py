"""Icon and palette library: manifests, similarity matching, constraints.

Similarity uses the embedding table when both words are in vocabulary,
with an exact/stemmed keyword match (similarity 1.0) as the fallback, so
the library still works with no embeddings loaded at all.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path

from .embeddings import EmbeddingTable
from .errors import InvariantViolation, MissingAsset, ParseError
from .resources import read_word_set
from .tokenizer import TokenKind, tokenize

DEFAULT_SIMILARITY_FLOOR = 0.3
GENERIC_PALETTE_BASELINE = 0.0


class Represents(Enum):
    PART = "part"
    WHOLE = "whole"
    GENERIC = "generic"


@dataclass(frozen=True)
class IconAsset:
    id: str
    svg_path: Path
    keywords: tuple[str, ...]
    pictograph_ok: bool
    fillable: bool
    hollow: bool
    background_ok: bool
    represents: Represents
    aspect: float  # width / height
    fill_direction: str = "ltr"  # or "btt" for container-like icons


@dataclass(frozen=True)
class Palette:
    id: str
    keywords: tuple[str, ...]
    background: str
    text_primary: str
    text_emphasis: str
    graphic_primary: str
    graphic_secondary: str

    def roles(self) -> dict[str, str]:
        return {
            "background": self.background,
            "text_primary": self.text_primary,
            "text_emphasis": self.text_emphasis,
            "graphic_primary": self.graphic_primary,
            "graphic_secondary": self.graphic_secondary,
        }


@dataclass(frozen=True)
class MatchResult:
    asset_id: str
    similarity: float
    query_word: str
    keyword: str


# -- color math ---------------------------------------------------------------


def _srgb_channel(v: int) -> float:
    c = v / 255.0
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def relative_luminance(hex_color: str) -> float:
    m = re.fullmatch(r"#([0-9a-fA-F]{6})", hex_color)
    if not m:
        raise ValueError(f"bad color literal {hex_color!r}")
    r, g, b = (int(m.group(1)[i : i + 2], 16) for i in (0, 2, 4))
    return 0.2126 * _srgb_channel(r) + 0.7152 * _srgb_channel(g) + 0.0722 * _srgb_channel(b)


def contrast_ratio(a: str, b: str) -> float:
    la, lb = relative_luminance(a), relative_luminance(b)
    hi, lo = max(la, lb), min(la, lb)
    return (hi + 0.05) / (lo + 0.05)


# -- word helpers ---------------------------------------------------------------


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    return read_word_set("lexicons", "stopwords.txt")


def stem(word: str) -> str:
    w = word.lower()
    for suffix in ("ing", "ers", "ies", "es", "ed", "er", "s"):
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            return w[: -len(suffix)]
    return w


def non_stop_words(text: str) -> list[str]:
    """Lowercased, ordered, deduped content words of a statement."""
    out: list[str] = []
    seen = set()
    for tok in tokenize(text):
        if tok.kind not in (TokenKind.WORD, TokenKind.ABBREVIATION, TokenKind.SPECIAL_PHRASE):
            continue
        w = tok.lower.strip(".")
        if not w or w in stopwords() or w in seen:
            continue
        seen.add(w)
        out.append(w)
    return out


# -- library -----------------------------------------------------------------


_ICON_GROUP_RE = re.compile(r"<g\b[^>]*>(.*)</g>", re.DOTALL)


class AssetLibrary:
    def __init__(
        self,
        icons: list[IconAsset],
        palettes: list[Palette],
        base_dir: Path,
        embeddings: EmbeddingTable | None = None,
    ):
        self.icons = {i.id: i for i in icons}
        self.palettes = {p.id: p for p in palettes}
        self.base_dir = base_dir
        self.embeddings = embeddings
        self._svg_cache: dict[str, tuple[float, float, str]] = {}

    # -- loading ---------------------------------------------------------

    @classmethod
    def load(cls, assets_dir: str | Path, embeddings: EmbeddingTable | None = None) -> "AssetLibrary":
        assets_dir = Path(assets_dir)
        icons = [_icon_from_entry(e, assets_dir) for e in _read_manifest(assets_dir / "icons.json")]
        palettes = [_palette_from_entry(e) for e in _read_manifest(assets_dir / "palettes.json")]
        for items, what in ((icons, "icon"), (palettes, "palette")):
            seen = set()
            for item in items:
                if item.id in seen:
                    raise InvariantViolation(f"duplicate {what} id {item.id!r}")
                seen.add(item.id)
        return cls(icons, palettes, assets_dir, embeddings)

    def summary(self) -> dict[str, int]:
        return {
            "icons": len(self.icons),
            "palettes": len(self.palettes),
            "pictograph_ok": sum(i.pictograph_ok for i in self.icons.values()),
            "fillable": sum(i.fillable for i in self.icons.values()),
            "hollow": sum(i.hollow for i in self.icons.values()),
            "background_ok": sum(i.background_ok for i in self.icons.values()),
            "generic_palettes": sum(not p.keywords for p in self.palettes.values()),
        }

    def icon(self, icon_id: str) -> IconAsset:
        if icon_id not in self.icons:
            raise MissingAsset(f"unknown icon {icon_id!r}")
        return self.icons[icon_id]

    def palette(self, palette_id: str) -> Palette:
        if palette_id not in self.palettes:
            raise MissingAsset(f"unknown palette {palette_id!r}")
        return self.palettes[palette_id]

    def icon_markup(self, icon_id: str) -> tuple[float, float, str]:
        """(viewbox_w, viewbox_h, inner markup) of an icon's root group."""
        if icon_id not in self._svg_cache:
            icon = self.icon(icon_id)
            path = icon.svg_path if icon.svg_path.is_absolute() else self.base_dir / icon.svg_path
            text = path.read_text(encoding="utf-8")
            import xml.etree.ElementTree as ET

            root = ET.fromstring(text)
            vb = root.attrib.get("viewBox", "").split()
            if len(vb) != 4:
                raise InvariantViolation(f"icon {icon_id}: missing viewBox")
            w, h = float(vb[2]), float(vb[3])
            m = _ICON_GROUP_RE.search(text)
            if not m:
                raise InvariantViolation(f"icon {icon_id}: no root <g> group")
            self._svg_cache[icon_id] = (w, h, m.group(1).strip())
        return self._svg_cache[icon_id]

    # -- similarity --------------------------------------------------------

    def _pair_similarity(self, word: str, keyword: str) -> float:
        if self.embeddings is not None:
            sim = self.embeddings.similarity(word, keyword)
            if sim is not None:
                return sim
        if word.lower() == keyword.lower() or stem(word) == stem(keyword):
            return 1.0
        return 0.0

    def _best_match(self, words: list[str], keywords: tuple[str, ...]) -> tuple[float, str, str]:
        best = (-2.0, "", "")
        for w in words:
            for k in keywords:
                sim = self._pair_similarity(w, k)
                if sim > best[0]:
                    best = (sim, w, k)
        return best

    def match_icons(
        self, words: list[str], k: int = 3, floor: float = DEFAULT_SIMILARITY_FLOOR
    ) -> list[MatchResult]:
        """Top-k icons by max cosine over (query word, keyword) pairs."""
        results = []
        for icon in self.icons.values():
            sim, word, keyword = self._best_match(words, icon.keywords)
            if sim >= floor:
                results.append(MatchResult(icon.id, float(sim), word, keyword))
        results.sort(key=lambda r: (-r.similarity, r.asset_id))
        return results[:k]

    def match_palettes(
        self,
        words: list[str],
        k: int = 3,
        floor: float = DEFAULT_SIMILARITY_FLOOR,
        baseline: float = GENERIC_PALETTE_BASELINE,
    ) -> list[MatchResult]:
        """Top-k palettes; keyword-less palettes always compete at ``baseline``."""
        results = []
        for palette in self.palettes.values():
            if not palette.keywords:
                results.append(MatchResult(palette.id, baseline, "", ""))
                continue
            sim, word, keyword = self._best_match(words, palette.keywords)
            if sim >= floor:
                results.append(MatchResult(palette.id, float(sim), word, keyword))
        results.sort(key=lambda r: (-r.similarity, r.asset_id))
        return results[:k]


def _read_manifest(path: Path) -> list[dict]:
    if not path.exists():
        raise ParseError(f"{path}: manifest not found")
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise ParseError(f"{path}:1: empty manifest")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, list):
        raise ParseError(f"{path}:1: expected a JSON array of entries")
    return data


def _icon_from_entry(entry: dict, base: Path) -> IconAsset:
    icon_id = entry.get("id", "<missing id>")
    try:
        icon = IconAsset(
            id=entry["id"],
            svg_path=Path(entry["svg_path"]),
            keywords=tuple(entry["keywords"]),
            pictograph_ok=bool(entry["pictograph_ok"]),
            fillable=bool(entry["fillable"]),
            hollow=bool(entry["hollow"]),
            background_ok=bool(entry["background_ok"]),
            represents=Represents(entry["represents"]),
            aspect=float(entry["aspect"]),
            fill_direction=entry.get("fill_direction", "ltr"),
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"icon {icon_id!r}: {exc!r}") from exc
    if not icon.keywords:
        raise InvariantViolation(f"icon {icon.id!r}: needs at least one keyword")
    if icon.hollow and icon.fillable:
        raise InvariantViolation(f"icon {icon.id!r}: hollow icons cannot be fillable")
    if icon.aspect <= 0:
        raise InvariantViolation(f"icon {icon.id!r}: aspect must be positive")
    if icon.fill_direction not in ("ltr", "btt"):
        raise InvariantViolation(f"icon {icon.id!r}: bad fill_direction {icon.fill_direction!r}")
    return icon


def _palette_from_entry(entry: dict) -> Palette:
    pid = entry.get("id", "<missing id>")
    try:
        colors = entry["colors"]
        palette = Palette(
            id=entry["id"],
            keywords=tuple(entry.get("keywords", ())),
            background=colors["background"],
            text_primary=colors["text_primary"],
            text_emphasis=colors["text_emphasis"],
            graphic_primary=colors["graphic_primary"],
            graphic_secondary=colors["graphic_secondary"],
        )
    except KeyError as exc:
        raise ParseError(f"palette {pid!r}: missing {exc}") from exc
    for role, color in palette.roles().items():
        if not re.fullmatch(r"#[0-9a-fA-F]{6}", color):
            raise InvariantViolation(f"palette {palette.id!r}: bad {role} color {color!r}")
    if contrast_ratio(palette.background, palette.text_primary) < 3.0:
        raise InvariantViolation(
            f"palette {palette.id!r}: background/text contrast below 3.0"
        )
    return palette
