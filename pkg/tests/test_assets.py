import json

import pytest

from statviz.assets import (
    AssetLibrary,
    contrast_ratio,
    non_stop_words,
    stopwords,
)
from statviz.errors import InvariantViolation, ParseError
from statviz.resources import data_path


@pytest.fixture(scope="module")
def library(embeddings):
    import statviz.embeddings as emb_mod

    emb = emb_mod.load_embeddings(data_path("embeddings_50d.txt"))
    return AssetLibrary.load(data_path(), emb)


@pytest.fixture(scope="module")
def fallback_library():
    return AssetLibrary.load(data_path(), embeddings=None)


def test_bundled_pack_loads_with_expected_counts(library):
    s = library.summary()
    assert s["icons"] >= 40
    assert s["palettes"] >= 12
    assert s["generic_palettes"] >= 1
    assert s["pictograph_ok"] > 0 and s["fillable"] > 0 and s["hollow"] > 0


def test_hollow_never_fillable(library):
    for icon in library.icons.values():
        assert not (icon.hollow and icon.fillable)
        assert icon.aspect > 0
        assert icon.keywords


def test_palette_contrast_invariant(library):
    for p in library.palettes.values():
        assert contrast_ratio(p.background, p.text_primary) >= 3.0
        assert len(p.roles()) == 5


def test_manifest_rejects_hollow_fillable(tmp_path):
    entry = {
        "id": "bad", "svg_path": "icons/bad.svg", "keywords": ["x"],
        "pictograph_ok": True, "fillable": True, "hollow": True,
        "background_ok": False, "represents": "generic", "aspect": 1.0,
    }
    (tmp_path / "icons.json").write_text(json.dumps([entry]))
    (tmp_path / "palettes.json").write_text("[]")
    with pytest.raises(InvariantViolation):
        AssetLibrary.load(tmp_path)


def test_manifest_rejects_duplicates(tmp_path, library):
    entries = json.loads(data_path("icons.json").read_text())
    entries.append(entries[0])
    (tmp_path / "icons.json").write_text(json.dumps(entries))
    (tmp_path / "palettes.json").write_text(data_path("palettes.json").read_text())
    with pytest.raises(InvariantViolation, match="duplicate"):
        AssetLibrary.load(tmp_path)


def test_empty_manifest_is_parse_error(tmp_path):
    (tmp_path / "icons.json").write_text("")
    (tmp_path / "palettes.json").write_text("[]")
    with pytest.raises(ParseError):
        AssetLibrary.load(tmp_path)


def test_broken_json_reports_line(tmp_path):
    (tmp_path / "icons.json").write_text('[\n{"id": "x",}\n]')
    (tmp_path / "palettes.json").write_text("[]")
    with pytest.raises(ParseError, match=r":2:"):
        AssetLibrary.load(tmp_path)


def test_match_icons_students(library):
    results = library.match_icons(["students"], k=3)
    assert results, "expected at least one icon match"
    assert results[0].asset_id == "student"
    assert results[0].similarity >= 0.9
    assert results[0].query_word == "students"


def test_match_results_sorted_and_deterministic(library):
    words = ["students", "football"]
    a = library.match_icons(words, k=5)
    b = library.match_icons(words, k=5)
    assert a == b
    sims = [r.similarity for r in a]
    assert sims == sorted(sims, reverse=True)


def test_fallback_exact_match(fallback_library):
    results = fallback_library.match_icons(["coffee"], k=3)
    assert results[0].similarity == 1.0
    assert results[0].asset_id == "cup"
    # stemmed match also hits 1.0
    results = fallback_library.match_icons(["students"], k=3)
    assert results[0].asset_id == "student"
    assert results[0].similarity == 1.0


def test_match_icons_floor_empty(fallback_library):
    assert fallback_library.match_icons(["zzzunknown"], k=3) == []


def test_match_palettes_coffee(library):
    results = library.match_palettes(["coffee", "breakfast"], k=3)
    assert results[0].asset_id == "coffee"


def test_match_palettes_environment(library):
    results = library.match_palettes(["environment", "protection"], k=3)
    assert results[0].asset_id == "forest"


def test_generic_palette_always_available(library):
    results = library.match_palettes(["zzzunknown"], k=3)
    assert results, "generic palettes must be returned with no semantic match"
    assert all(library.palettes[r.asset_id].keywords == () for r in results)


def test_self_similarity(library):
    for word in ("students", "coffee", "environment"):
        assert library._pair_similarity(word, word) == pytest.approx(1.0, abs=1e-6)


def test_icon_markup_extraction(library):
    w, h, inner = library.icon_markup("person")
    assert w == 24 and h == 48
    assert "<circle" in inner or "<path" in inner


def test_stopwords_keep_modifier_words():
    s = stopwords()
    for word in ("more", "less", "than", "about", "nearly", "half"):
        assert word not in s, f"{word} must stay contentful for informative scoring"
    assert "the" in s and "of" in s


def test_non_stop_words():
    words = non_stop_words("More than 40% of students like football.")
    assert words == ["more", "than", "students", "like", "football"]
