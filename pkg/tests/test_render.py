import re
import xml.etree.ElementTree as ET

import pytest

from statviz.assets import AssetLibrary
from statviz.charts import GraphicKind
from statviz.facts import segment_facts
from statviz.render import SVG_NS, extract_metadata, render, validate
from statviz.resources import data_path
from statviz.synth import synthesize


@pytest.fixture(scope="module")
def assets(embeddings):
    return AssetLibrary.load(data_path(), embeddings)


@pytest.fixture(scope="module")
def football(tagger, assets):
    group = segment_facts("More than 40% of students like football.", tagger)
    return synthesize(group, assets)


@pytest.fixture(scope="module")
def fraction(tagger, assets):
    group = segment_facts("2 in 5 adults drink coffee every morning.", tagger)
    return synthesize(group, assets)


def doc_for(candidates, assets, **want):
    for c in candidates:
        if all(getattr(c, k, None) == v or (k == "kind" and any(
                g.spec.kind is v for g in c.layout.graphics.values()))
               for k, v in want.items()):
            return c, render(c, assets)
    raise AssertionError(f"no candidate matching {want}")


def test_render_is_deterministic(football, assets):
    for c in football[:5]:
        assert render(c, assets).markup == render(c, assets).markup


def test_render_well_formed_and_valid(football, assets):
    for c in football[:8]:
        doc = render(c, assets)
        assert validate(doc) == [], doc.markup[:400]


def test_background_uses_palette_role(football, assets):
    c = football[0]
    doc = render(c, assets)
    palette = assets.palette(c.palette_id)
    root = ET.fromstring(doc.markup)
    rects = root.findall(f"{{{SVG_NS}}}rect")
    assert rects[0].attrib["fill"] == palette.background
    assert rects[0].attrib["width"] == doc.markup.split('width="')[1].split('"')[0]


def test_number_text_uses_emphasis_color(football, assets):
    c = football[0]
    doc = render(c, assets)
    palette = assets.palette(c.palette_id)
    root = ET.fromstring(doc.markup)
    num_texts = [el for el in root.iter(f"{{{SVG_NS}}}text")
                 if el.attrib.get("data-region", "").startswith("num")]
    assert num_texts
    for el in num_texts:
        assert el.attrib["fill"] == palette.text_emphasis


def test_every_color_from_palette_roles(football, assets):
    for c in football[:8]:
        doc = render(c, assets)
        palette = assets.palette(c.palette_id)
        roles = set(palette.roles().values())
        for literal in re.findall(r'fill="(#[0-9A-Fa-f]{6})"', doc.markup):
            assert literal in roles, f"{literal} not a palette role of {c.palette_id}"


def test_pictograph_two_of_five(fraction, assets):
    c, doc = doc_for(fraction, assets, kind=GraphicKind.PICTOGRAPH)
    picto = next(g.spec.pictograph for g in c.layout.graphics.values()
                 if g.spec.kind is GraphicKind.PICTOGRAPH)
    assert (picto.rows, picto.cols, picto.filled_full) == (1, 5, 2)
    palette = assets.palette(c.palette_id)
    root = ET.fromstring(doc.markup)
    uses = [el for el in root.iter(f"{{{SVG_NS}}}use")]
    primary = [u for u in uses if u.attrib.get("fill") == palette.graphic_primary]
    secondary = [u for u in uses if u.attrib.get("fill") == palette.graphic_secondary]
    assert len(primary) == 2
    assert len(secondary) == 3


def test_partial_fill_clip_geometry(tagger, assets):
    group = segment_facts("65% of adults drink coffee every morning.", tagger)
    candidates = synthesize(group, assets)
    c = next(c for c in candidates
             for g in c.layout.graphics.values()
             if g.spec.kind is GraphicKind.PICTOGRAPH and g.spec.pictograph.count == 10
             and g.spec.pictograph.rows == 1)
    doc = render(c, assets)
    picto = next(g.spec.pictograph for g in c.layout.graphics.values()
                 if g.spec.kind is GraphicKind.PICTOGRAPH)
    assert picto.filled_full == 6
    assert picto.partial_fraction == pytest.approx(0.5)
    root = ET.fromstring(doc.markup)
    clips = root.findall(f".//{{{SVG_NS}}}clipPath/{{{SVG_NS}}}rect")
    assert clips, "partial icon must be clipped"


def test_bottom_to_top_fill_direction(tagger, assets):
    group = segment_facts("40% of adults drink coffee every morning.", tagger)
    candidates = synthesize(group, assets)
    cup = None
    for c in candidates:
        for g in c.layout.graphics.values():
            if g.spec.kind is GraphicKind.FILLED_ICON and g.spec.icon_id == "cup":
                cup = c
                break
        if cup:
            break
    assert cup is not None, "expected a filled cup candidate for a coffee statement"
    doc = render(cup, assets)
    root = ET.fromstring(doc.markup)
    vw, vh, _ = assets.icon_markup("cup")
    clip_rects = root.findall(f".//{{{SVG_NS}}}clipPath/{{{SVG_NS}}}rect")
    assert clip_rects
    r = clip_rects[0].attrib
    # bottom 40% of the icon bounds: y = 0.6*vh, height = 0.4*vh
    assert float(r["y"]) == pytest.approx(0.6 * vh, abs=1e-3)
    assert float(r["height"]) == pytest.approx(0.4 * vh, abs=1e-3)
    assert float(r["width"]) == pytest.approx(vw, abs=1e-3)


def test_metadata_round_trip(football, assets):
    c = football[0]
    doc = render(c, assets, seed=7)
    meta = extract_metadata(doc.markup)
    assert meta["candidate"] == c.id
    assert meta["seed"] == 7
    assert meta["scores"]["total"] == c.scores.total
    assert meta["statement"] == c.statement


def test_validator_flags_overflow(football, assets):
    doc = render(football[0], assets)
    broken = doc.markup.replace('data-rw="', 'data-rw="0.0', 1)
    findings = validate(broken)
    assert any("overflow" in f for f in findings)


def test_validator_flags_bad_viewbox(football, assets):
    doc = render(football[0], assets)
    broken = re.sub(r'viewBox="0 0 [\d.]+', 'viewBox="0 0 1', doc.markup, count=1)
    assert any("viewBox" in f for f in validate(broken))


def test_validator_flags_bad_xml():
    assert validate("<svg><unclosed></svg>")[0].startswith("not well-formed")
