"""Turn a scored candidate into a self-contained SVG document.

Output is deterministic byte-for-byte: every float goes through one
formatter, elements are emitted in a fixed order (background, graphics,
texts), and icon geometry is embedded from the asset files. Palette
roles drive every color literal; partial fills use clip paths along the
icon's declared fill direction.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .assets import AssetLibrary, Palette
from .charts import ChartGeometry, GraphicKind
from .errors import MissingAsset
from .layout import PAD, GraphicLayout, Rect, SolvedLayout, TextLayout
from .synth import Candidate
from .textmetrics import bundled_fonts

SVG_NS = "http://www.w3.org/2000/svg"
XLINK_NS = "http://www.w3.org/1999/xlink"

# baseline sits at this fraction of the line box, measured from its top
BASELINE_RATIO = 0.8


def fmt(x: float) -> str:
    """Canonical float formatting: 3 decimals, trailing zeros stripped."""
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _series_color(role: str, palette: Palette) -> str:
    table = {
        "series0": palette.graphic_primary,
        "series1": palette.graphic_secondary,
        "series2": palette.text_emphasis,
        "series3": palette.text_primary,
        "remainder": palette.graphic_secondary,
    }
    if role not in table:
        raise MissingAsset(f"no palette role for chart series {role!r}")
    return table[role]


@dataclass(frozen=True)
class SvgDocument:
    width: float
    height: float
    markup: str
    candidate_id: str
    metadata: dict

    def to_bytes(self) -> bytes:
        return self.markup.encode("utf-8")


class _Builder:
    def __init__(self):
        self.defs: list[str] = []
        self.body: list[str] = []
        self._clip_count = 0
        self._icon_defs: dict[str, tuple[float, float]] = {}

    def icon_def(self, assets: AssetLibrary, icon_id: str) -> tuple[float, float]:
        if icon_id not in self._icon_defs:
            vw, vh, inner = assets.icon_markup(icon_id)
            self.defs.append(f'<g id="icon-{icon_id}">{inner}</g>')
            self._icon_defs[icon_id] = (vw, vh)
        return self._icon_defs[icon_id]

    def clip_rect(self, x: float, y: float, w: float, h: float) -> str:
        cid = f"clip{self._clip_count}"
        self._clip_count += 1
        self.defs.append(
            f'<clipPath id="{cid}"><rect x="{fmt(x)}" y="{fmt(y)}" '
            f'width="{fmt(w)}" height="{fmt(h)}"/></clipPath>'
        )
        return cid


def _icon_use(
    builder: _Builder,
    assets: AssetLibrary,
    icon_id: str,
    rect: Rect,
    fill: str,
    clip_fraction: float | None = None,
    fill_direction: str = "ltr",
) -> str:
    """Place one icon instance into ``rect``; optionally clip to a fraction."""
    vw, vh = builder.icon_def(assets, icon_id)
    scale = rect.h / vh
    clip = ""
    if clip_fraction is not None:
        f = min(max(clip_fraction, 0.0), 1.0)
        if fill_direction == "btt":
            cid = builder.clip_rect(0, (1 - f) * vh, vw, f * vh)
        else:
            cid = builder.clip_rect(0, 0, f * vw, vh)
        clip = f' clip-path="url(#{cid})"'
    return (
        f'<g transform="translate({fmt(rect.x)} {fmt(rect.y)}) scale({fmt(scale)})">'
        f'<use href="#icon-{icon_id}" fill="{fill}"{clip}/></g>'
    )


def _sector_point(cx: float, cy: float, r: float, angle_deg: float) -> tuple[float, float]:
    # angles measured clockwise from 12 o'clock
    theta = math.radians(angle_deg)
    return cx + r * math.sin(theta), cy - r * math.cos(theta)


def _sector_path(cx, cy, r_outer, r_inner, start, end) -> str:
    sweep = end - start
    if sweep >= 360.0 - 1e-9:
        if r_inner > 0:
            return (
                f'M {fmt(cx)} {fmt(cy - r_outer)} '
                f'A {fmt(r_outer)} {fmt(r_outer)} 0 1 1 {fmt(cx)} {fmt(cy + r_outer)} '
                f'A {fmt(r_outer)} {fmt(r_outer)} 0 1 1 {fmt(cx)} {fmt(cy - r_outer)} Z '
                f'M {fmt(cx)} {fmt(cy - r_inner)} '
                f'A {fmt(r_inner)} {fmt(r_inner)} 0 1 0 {fmt(cx)} {fmt(cy + r_inner)} '
                f'A {fmt(r_inner)} {fmt(r_inner)} 0 1 0 {fmt(cx)} {fmt(cy - r_inner)} Z'
            )
        return (
            f'M {fmt(cx)} {fmt(cy - r_outer)} '
            f'A {fmt(r_outer)} {fmt(r_outer)} 0 1 1 {fmt(cx)} {fmt(cy + r_outer)} '
            f'A {fmt(r_outer)} {fmt(r_outer)} 0 1 1 {fmt(cx)} {fmt(cy - r_outer)} Z'
        )
    large = 1 if sweep > 180.0 else 0
    x0, y0 = _sector_point(cx, cy, r_outer, start)
    x1, y1 = _sector_point(cx, cy, r_outer, end)
    if r_inner <= 0:
        return (
            f'M {fmt(cx)} {fmt(cy)} L {fmt(x0)} {fmt(y0)} '
            f'A {fmt(r_outer)} {fmt(r_outer)} 0 {large} 1 {fmt(x1)} {fmt(y1)} Z'
        )
    xi1, yi1 = _sector_point(cx, cy, r_inner, end)
    xi0, yi0 = _sector_point(cx, cy, r_inner, start)
    return (
        f'M {fmt(x0)} {fmt(y0)} '
        f'A {fmt(r_outer)} {fmt(r_outer)} 0 {large} 1 {fmt(x1)} {fmt(y1)} '
        f'L {fmt(xi1)} {fmt(yi1)} '
        f'A {fmt(r_inner)} {fmt(r_inner)} 0 {large} 0 {fmt(xi0)} {fmt(yi0)} Z'
    )


def _render_chart(chart: ChartGeometry, rect: Rect, palette: Palette) -> list[str]:
    out = []
    if chart.sectors:
        r_outer = min(rect.w, rect.h) / 2
        cx, cy = rect.x + rect.w / 2, rect.y + rect.h / 2
        r_inner = r_outer * chart.inner_ratio
        for sector in chart.sectors:
            path = _sector_path(cx, cy, r_outer, r_inner, sector.start_angle, sector.end_angle)
            out.append(f'<path d="{path}" fill="{_series_color(sector.color_role, palette)}"/>')
    if chart.bars:
        total_units = max(bar.y + bar.height for bar in chart.bars)
        unit = rect.h / total_units
        radius = fmt(min(4.0, unit * 0.2))
        for bar in chart.bars:
            y = rect.y + bar.y * unit
            h = bar.height * unit
            out.append(
                f'<rect x="{fmt(rect.x)}" y="{fmt(y)}" width="{fmt(rect.w)}" '
                f'height="{fmt(h)}" rx="{radius}" fill="{palette.graphic_secondary}"/>'
            )
            out.append(
                f'<rect x="{fmt(rect.x)}" y="{fmt(y)}" width="{fmt(rect.w * bar.fraction)}" '
                f'height="{fmt(h)}" rx="{radius}" fill="{palette.graphic_primary}"/>'
            )
    return out


def _render_graphic(
    builder: _Builder, g: GraphicLayout, palette: Palette, assets: AssetLibrary
) -> list[str]:
    spec = g.spec
    out: list[str] = []
    if spec.kind in (GraphicKind.PIE, GraphicKind.DONUT, GraphicKind.BAR):
        return _render_chart(spec.chart, g.rect, palette)

    if spec.icon_id is None:
        raise MissingAsset(f"graphic {g.region_id} has no icon")

    if spec.kind is GraphicKind.PICTOGRAPH:
        picto = spec.pictograph
        from .charts import GRID_GAP

        cell_h = g.rect.h / (picto.rows * (1 + GRID_GAP) - GRID_GAP)
        cell_w = cell_h * picto.icon_aspect
        for k in range(picto.count):
            row, col = divmod(k, picto.cols)
            cell = Rect(
                g.rect.x + col * cell_w * (1 + GRID_GAP),
                g.rect.y + row * cell_h * (1 + GRID_GAP),
                cell_w,
                cell_h,
            )
            if k < picto.filled_full:
                out.append(_icon_use(builder, assets, spec.icon_id, cell, palette.graphic_primary))
            elif k == picto.filled_full and picto.partial_fraction > 0:
                out.append(_icon_use(builder, assets, spec.icon_id, cell, palette.graphic_secondary))
                out.append(
                    _icon_use(builder, assets, spec.icon_id, cell, palette.graphic_primary,
                              clip_fraction=picto.partial_fraction,
                              fill_direction=spec.fill_direction)
                )
            else:
                out.append(_icon_use(builder, assets, spec.icon_id, cell, palette.graphic_secondary))
        return out

    if spec.kind is GraphicKind.FILLED_ICON:
        out.append(_icon_use(builder, assets, spec.icon_id, g.rect, palette.graphic_secondary))
        out.append(
            _icon_use(builder, assets, spec.icon_id, g.rect, palette.graphic_primary,
                      clip_fraction=spec.fill_fraction, fill_direction=spec.fill_direction)
        )
        return out

    if spec.kind is GraphicKind.SCALED_ICON:
        out.append(_icon_use(builder, assets, spec.icon_id, g.rect, palette.graphic_secondary))
        k = math.sqrt(max(spec.fill_fraction, 0.0))  # area-proportional
        solid = Rect(
            g.rect.x + (g.rect.w - g.rect.w * k) / 2,
            g.rect.y + (g.rect.h - g.rect.h * k),
            g.rect.w * k,
            g.rect.h * k,
        )
        out.append(_icon_use(builder, assets, spec.icon_id, solid, palette.graphic_primary))
        return out

    if spec.kind is GraphicKind.BACKGROUND:
        out.append(_icon_use(builder, assets, spec.icon_id, g.rect, palette.graphic_secondary))
        return out

    # adornment
    out.append(_icon_use(builder, assets, spec.icon_id, g.rect, palette.graphic_primary))
    return out


def _render_text(t: TextLayout, region: Rect, palette: Palette, emphasis: bool, fonts) -> list[str]:
    font = fonts[t.font_family]
    color = palette.text_emphasis if emphasis else palette.text_primary
    line_height = t.size * font.line_height
    out = []
    for i, (line, width) in enumerate(zip(t.lines, t.line_widths)):
        if t.align == "left":
            x, anchor = t.block.x, "start"
        else:
            x, anchor = t.block.x + t.block.w / 2, "middle"
        y = t.block.y + i * line_height + BASELINE_RATIO * line_height
        out.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-family="{font.css_stack()}" '
            f'font-size="{fmt(t.size)}" fill="{color}" text-anchor="{anchor}" '
            f'data-region="{t.region_id}" data-rw="{fmt(region.w - 2 * PAD)}" '
            f'data-font="{t.font_family}">{_escape(line)}</text>'
        )
    return out


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render(candidate: Candidate, assets: AssetLibrary, seed: int = 0) -> SvgDocument:
    """Pure function of (candidate, assets, seed): identical bytes every call."""
    layout: SolvedLayout = candidate.layout
    palette = assets.palette(candidate.palette_id)
    builder = _Builder()

    regions_by_slot = {r.id: r for r in candidate.blueprint.regions()}

    graphics = sorted(
        layout.graphics.items(),
        key=lambda kv: (kv[1].spec.kind is not GraphicKind.BACKGROUND, kv[0]),
    )
    chunks: list[str] = []
    for rid, g in graphics:
        chunks.extend(_render_graphic(builder, g, palette, assets))
    for rid in sorted(layout.texts):
        t = layout.texts[rid]
        emphasis = regions_by_slot[rid].slot.value in ("number", "title")
        chunks.extend(_render_text(t, layout.regions[rid], palette, emphasis, bundled_fonts()))

    metadata = {
        "candidate": candidate.id,
        "blueprint": candidate.blueprint.id,
        "relation": candidate.relation.value,
        "palette": candidate.palette_id,
        "icons": dict(sorted(candidate.icons.items())),
        "scores": candidate.scores.to_dict() if candidate.scores else None,
        "seed": seed,
        "statement": candidate.statement,
    }
    meta_json = json.dumps(metadata, sort_keys=True, separators=(",", ":"))
    # XML comments must not contain "--"; - survives JSON round-trips
    meta_comment = meta_json.replace("--", "-\\u002d")

    w, h = fmt(layout.canvas_w), fmt(layout.canvas_h)
    lines = [
        f'<svg xmlns="{SVG_NS}" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<!-- statviz:meta {meta_comment} -->",
    ]
    if builder.defs:
        lines.append("<defs>" + "".join(builder.defs) + "</defs>")
    lines.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="{palette.background}"/>')
    lines.extend(chunks)
    lines.append("</svg>")
    return SvgDocument(
        width=layout.canvas_w,
        height=layout.canvas_h,
        markup="\n".join(lines) + "\n",
        candidate_id=candidate.id,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

_META_RE = re.compile(r"<!-- statviz:meta (.*?) -->", re.DOTALL)


def extract_metadata(markup: str) -> dict | None:
    m = _META_RE.search(markup)
    return json.loads(m.group(1)) if m else None


def validate(svg: SvgDocument | str | bytes) -> list[str]:
    """Structural findings for a rendered document (empty list = clean)."""
    import xml.etree.ElementTree as ET

    markup = svg.markup if isinstance(svg, SvgDocument) else (
        svg.decode("utf-8") if isinstance(svg, bytes) else svg
    )
    findings: list[str] = []
    try:
        root = ET.fromstring(markup)
    except ET.ParseError as exc:
        return [f"not well-formed XML: {exc}"]

    width = float(root.attrib.get("width", "0"))
    height = float(root.attrib.get("height", "0"))
    viewbox = root.attrib.get("viewBox", "").split()
    if len(viewbox) != 4:
        findings.append("missing or malformed viewBox")
    else:
        vw, vh = float(viewbox[2]), float(viewbox[3])
        if abs(vw - width) > 1e-6 or abs(vh - height) > 1e-6:
            findings.append(f"viewBox {vw}x{vh} disagrees with size {width}x{height}")
        elif height > 0 and abs((vw / vh) - (width / height)) > 1e-9:
            findings.append("viewBox aspect disagrees with width/height aspect")

    fonts = bundled_fonts()
    for el in root.iter(f"{{{SVG_NS}}}text"):
        family = el.attrib.get("data-font")
        rw = el.attrib.get("data-rw")
        if family is None or rw is None or family not in fonts:
            continue
        size = float(el.attrib.get("font-size", "0"))
        measured = fonts[family].text_width(el.text or "", size)
        if measured > float(rw) + 0.5:
            findings.append(
                f"text overflow in {el.attrib.get('data-region')}: "
                f"{measured:.2f} > {float(rw):.2f} + 0.5"
            )
    return findings
