"""Candidate snapshots: full JSON round-trip of a solved, scored candidate.

Floats survive exactly (repr round-trip), so a reloaded snapshot renders
byte-identical SVG without re-solving.
"""

from __future__ import annotations

from .assets import MatchResult
from .blueprints import load_bundled_blueprints
from .charts import Bar, ChartGeometry, GraphicKind, GraphicSpec, PictographOption, Sector
from .facts import DescriptionSet, FactGroup, Polarity, ProportionFact, Relation
from .layout import GraphicLayout, Rect, SolvedLayout, TextLayout
from .synth import Candidate, Scores


def _rect_to(r: Rect) -> list[float]:
    return [r.x, r.y, r.w, r.h]


def _rect_from(v: list[float]) -> Rect:
    return Rect(*v)


def _spec_to(s: GraphicSpec) -> dict:
    out = {
        "kind": s.kind.value,
        "aspect": s.aspect,
        "icon_id": s.icon_id,
        "fill_fraction": s.fill_fraction,
        "fill_direction": s.fill_direction,
        "fact_index": s.fact_index,
    }
    if s.pictograph:
        p = s.pictograph
        out["pictograph"] = [p.rows, p.cols, p.filled_full, p.partial_fraction, p.icon_aspect]
    if s.chart:
        c = s.chart
        out["chart"] = {
            "kind": c.kind.value,
            "aspect": c.aspect,
            "inner_ratio": c.inner_ratio,
            "sectors": [[x.start_angle, x.end_angle, x.color_role, x.label] for x in c.sectors],
            "bars": [[b.y, b.height, b.fraction, b.color_role, b.label] for b in c.bars],
        }
    return out


def _spec_from(d: dict) -> GraphicSpec:
    picto = None
    if d.get("pictograph"):
        picto = PictographOption(*d["pictograph"])
    chart = None
    if d.get("chart"):
        c = d["chart"]
        chart = ChartGeometry(
            kind=GraphicKind(c["kind"]),
            aspect=c["aspect"],
            inner_ratio=c["inner_ratio"],
            sectors=tuple(Sector(*s) for s in c["sectors"]),
            bars=tuple(Bar(*b) for b in c["bars"]),
        )
    return GraphicSpec(
        kind=GraphicKind(d["kind"]),
        aspect=d["aspect"],
        icon_id=d["icon_id"],
        pictograph=picto,
        chart=chart,
        fill_fraction=d["fill_fraction"],
        fill_direction=d["fill_direction"],
        fact_index=d["fact_index"],
    )


def _layout_to(l: SolvedLayout) -> dict:
    return {
        "canvas": [l.canvas_w, l.canvas_h],
        "font_family": l.font_family,
        "objective": l.objective,
        "regions": {rid: _rect_to(r) for rid, r in l.regions.items()},
        "texts": {
            rid: {
                "text": t.text,
                "lines": list(t.lines),
                "line_widths": list(t.line_widths),
                "font_family": t.font_family,
                "size": t.size,
                "block": _rect_to(t.block),
                "align": t.align,
            }
            for rid, t in l.texts.items()
        },
        "graphics": {
            rid: {"spec": _spec_to(g.spec), "rect": _rect_to(g.rect)}
            for rid, g in l.graphics.items()
        },
    }


def _layout_from(d: dict) -> SolvedLayout:
    return SolvedLayout(
        canvas_w=d["canvas"][0],
        canvas_h=d["canvas"][1],
        regions={rid: _rect_from(v) for rid, v in d["regions"].items()},
        texts={
            rid: TextLayout(
                region_id=rid,
                text=t["text"],
                lines=tuple(t["lines"]),
                line_widths=tuple(t["line_widths"]),
                font_family=t["font_family"],
                size=t["size"],
                block=_rect_from(t["block"]),
                align=t["align"],
            )
            for rid, t in d["texts"].items()
        },
        graphics={
            rid: GraphicLayout(region_id=rid, spec=_spec_from(g["spec"]), rect=_rect_from(g["rect"]))
            for rid, g in d["graphics"].items()
        },
        font_family=d["font_family"],
        objective=d["objective"],
    )


def _fact_to(f: ProportionFact) -> dict:
    return {
        "statement": f.statement,
        "value": f.value,
        "surface_number": f.surface_number,
        "number_span": list(f.number_span),
        "numerator": f.numerator,
        "denominator": f.denominator,
        "modifier": f.modifier,
        "modifier_polarity": f.modifier_polarity.value,
        "modifier_span": list(f.modifier_span) if f.modifier_span else None,
        "part": f.part,
        "part_span": list(f.part_span) if f.part_span else None,
        "whole": f.whole,
        "whole_span": list(f.whole_span) if f.whole_span else None,
        "whole_inherited": f.whole_inherited,
    }


def _fact_from(d: dict) -> ProportionFact:
    return ProportionFact(
        statement=d["statement"],
        value=d["value"],
        surface_number=d["surface_number"],
        number_span=tuple(d["number_span"]),
        numerator=d["numerator"],
        denominator=d["denominator"],
        modifier=d["modifier"],
        modifier_polarity=Polarity(d["modifier_polarity"]),
        modifier_span=tuple(d["modifier_span"]) if d["modifier_span"] else None,
        part=d["part"],
        part_span=tuple(d["part_span"]) if d["part_span"] else None,
        whole=d["whole"],
        whole_span=tuple(d["whole_span"]) if d["whole_span"] else None,
        whole_inherited=d["whole_inherited"],
    )


def _desc_to(s: DescriptionSet) -> dict:
    return {
        "entire": s.entire,
        "number_removed": s.number_removed,
        "number": s.number,
        "before_number": s.before_number,
        "after_number": s.after_number,
        "part_phrase": s.part_phrase,
        "number_whole_phrase": s.number_whole_phrase,
        "modifier": s.modifier,
    }


def _match_to(m: MatchResult | None) -> list | None:
    return None if m is None else [m.asset_id, m.similarity, m.query_word, m.keyword]


def _match_from(v: list | None) -> MatchResult | None:
    return None if v is None else MatchResult(*v)


def candidate_to_dict(c: Candidate) -> dict:
    return {
        "id": c.id,
        "blueprint": c.blueprint.id,
        "fact_count": len(c.group.facts),
        "relation": c.relation.value,
        "group_relation": c.group.relation.value,
        "facts": [_fact_to(f) for f in c.group.facts],
        "descriptions": [_desc_to(d) for d in c.descriptions],
        "icons": dict(c.icons),
        "icon_matches": {rid: _match_to(m) for rid, m in c.icon_matches.items()},
        "palette": c.palette_id,
        "palette_match": _match_to(c.palette_match),
        "layout": _layout_to(c.layout),
        "scores": c.scores.to_dict() if c.scores else None,
        "parent": c.parent_id,
    }


def candidate_from_dict(d: dict) -> Candidate:
    blueprint = next(
        b for b in load_bundled_blueprints(d["fact_count"]) if b.id == d["blueprint"]
    )
    facts = tuple(_fact_from(f) for f in d["facts"])
    group = FactGroup(facts, Relation(d["group_relation"]))
    descriptions = tuple(DescriptionSet(**desc) for desc in d["descriptions"])
    scores = None
    if d["scores"]:
        s = d["scores"]
        scores = Scores(s["semantic"], s["visual"], s["informative"], s["total"])
    return Candidate(
        id=d["id"],
        blueprint=blueprint,
        group=group,
        relation=Relation(d["relation"]),
        descriptions=descriptions,
        icons=dict(d["icons"]),
        icon_matches={rid: _match_from(m) for rid, m in d["icon_matches"].items()},
        palette_id=d["palette"],
        palette_match=_match_from(d["palette_match"]),
        layout=_layout_from(d["layout"]),
        scores=scores,
        parent_id=d["parent"],
    )
