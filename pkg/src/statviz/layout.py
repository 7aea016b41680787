"""Layout solving: scale and place blueprint contents by linear optimization.

For each discrete combination (font family, line breaking per text slot,
graphic option per graphic slot) the engine builds linear constraints --
region tiling, containment, minimum font size, font-ratio bands -- and
pushes every element's size upward at medium priority, which maximizes
content size subject to the required constraints. The best feasible
combination by total element area wins.

``check_layout`` re-validates a solved layout from the raw numbers,
independent of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .blueprints import Blueprint, Child, Node, Region, SlotKind
from .charts import GraphicKind, GraphicSpec
from .errors import Infeasible
from .solver import MEDIUM, WEAK, SimplexSolver, Variable, eq, ge, le
from .textmetrics import FontMetrics, LineBreaking, break_lines, bundled_fonts

PAD = 10.0
MIN_FONT = 8.0
MIN_GRAPHIC = 24.0
CHECK_TOL = 1e-6
TEXT_OVERFLOW_TOL = 0.5


@dataclass(frozen=True)
class TextContent:
    text: str


@dataclass(frozen=True)
class GraphicContent:
    options: tuple[GraphicSpec, ...]


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    def inset(self, pad: float) -> "Rect":
        return Rect(self.x + pad, self.y + pad, max(self.w - 2 * pad, 0.0), max(self.h - 2 * pad, 0.0))

    def contains(self, other: "Rect", tol: float = CHECK_TOL) -> bool:
        return (
            other.x >= self.x - tol
            and other.y >= self.y - tol
            and other.x + other.w <= self.x + self.w + tol
            and other.y + other.h <= self.y + self.h + tol
        )

    def overlaps(self, other: "Rect", tol: float = CHECK_TOL) -> bool:
        return not (
            other.x >= self.x + self.w - tol
            or self.x >= other.x + other.w - tol
            or other.y >= self.y + self.h - tol
            or self.y >= other.y + other.h - tol
        )


@dataclass(frozen=True)
class TextLayout:
    region_id: str
    text: str
    lines: tuple[str, ...]
    line_widths: tuple[float, ...]  # at the solved size
    font_family: str
    size: float
    block: Rect
    align: str = "center"


@dataclass(frozen=True)
class GraphicLayout:
    region_id: str
    spec: GraphicSpec
    rect: Rect


@dataclass(frozen=True)
class SolvedLayout:
    canvas_w: float
    canvas_h: float
    regions: dict[str, Rect]
    texts: dict[str, TextLayout]
    graphics: dict[str, GraphicLayout]
    font_family: str
    objective: float  # total content area, canvas units^2
    choices: dict[str, object] = field(default_factory=dict)

    def element_rects(self) -> list[Rect]:
        return [t.block for t in self.texts.values()] + [g.rect for g in self.graphics.values()]


def _leaf_regions(node: Node) -> list[Region]:
    if node.region is not None:
        return [node.region]
    out: list[Region] = []
    for child in node.children:
        out.extend(_leaf_regions(child.node))
    return out


class _Problem:
    """Solver state shared across the discrete combinations of one solve."""

    def __init__(self, blueprint: Blueprint, contents: dict[str, TextContent | GraphicContent]):
        self.blueprint = blueprint
        self.contents = contents
        self.canvas_w, self.canvas_h = blueprint.canvas_size
        self.solver = SimplexSolver()
        self.rect_vars: dict[str, dict[str, Variable]] = {}
        self.font_vars: dict[str, Variable] = {}
        self.scale_vars: dict[str, Variable] = {}
        self._push = self.canvas_w + self.canvas_h
        self._active: dict[str, list] = {}
        self._build_structure()

    def _vars_for(self, rid: str) -> dict[str, Variable]:
        if rid not in self.rect_vars:
            self.rect_vars[rid] = {k: Variable(f"{rid}.{k}") for k in ("x", "y", "w", "h")}
        return self.rect_vars[rid]

    def _build_structure(self) -> None:
        s = self.solver
        root = self._node_vars = {}

        def build(node: Node, rv: dict[str, Variable]) -> None:
            if node.region is not None:
                region = node.region
                self.rect_vars[region.id] = rv
                if region.is_text:
                    f = self.font_vars[region.id] = Variable(f"{region.id}.font")
                    s.add_constraint(ge(f, MIN_FONT))
                    s.add_constraint(eq(f, self._push, strength=MEDIUM))
                elif region.slot is SlotKind.GRAPHIC:
                    content = self.contents.get(region.id)
                    kinds = {o.kind for o in content.options} if content else ()
                    if kinds and kinds != {GraphicKind.BACKGROUND}:
                        g = self.scale_vars[region.id] = Variable(f"{region.id}.scale")
                        s.add_constraint(ge(g, MIN_GRAPHIC))
                        s.add_constraint(eq(g, self._push, strength=MEDIUM))
                return
            kids = node.children
            kid_vars = [
                {k: Variable(f"n{id(node)}:{i}.{k}") for k in ("x", "y", "w", "h")}
                for i in range(len(kids))
            ]
            along, across, pos_along, pos_across = (
                ("w", "h", "x", "y") if node.split == "h" else ("h", "w", "y", "x")
            )
            total_flex = sum(c.flex for c in kids) or 1.0
            running = None
            for child, kv in zip(kids, kid_vars):
                s.add_constraint(eq(kv[across], rv[across]))
                s.add_constraint(eq(kv[pos_across], rv[pos_across]))
                if running is None:
                    s.add_constraint(eq(kv[pos_along], rv[pos_along]))
                else:
                    s.add_constraint(eq(kv[pos_along], running[pos_along] + running[along]))
                if child.min_frac is not None:
                    s.add_constraint(ge(kv[along], child.min_frac * rv[along]))
                if child.max_frac is not None:
                    s.add_constraint(le(kv[along], child.max_frac * rv[along]))
                s.add_constraint(eq(kv[along], (child.flex / total_flex) * rv[along], strength=WEAK))
                running = kv
            span = kid_vars[0][along]
            for kv in kid_vars[1:]:
                span = span + kv[along]
            s.add_constraint(eq(span, rv[along]))
            for child, kv in zip(kids, kid_vars):
                build(child.node, kv)

        root_vars = self._vars_for("__root__")
        s.add_constraint(eq(root_vars["x"], 0))
        s.add_constraint(eq(root_vars["y"], 0))
        s.add_constraint(eq(root_vars["w"], self.canvas_w))
        s.add_constraint(eq(root_vars["h"], self.canvas_h))
        build(self.blueprint.tree, root_vars)

        for overlay in self.blueprint.overlays:
            rv = self._vars_for(overlay.region.id)
            x0, y0, x1, y1 = overlay.inset
            s.add_constraint(eq(rv["x"], x0 * self.canvas_w))
            s.add_constraint(eq(rv["y"], y0 * self.canvas_h))
            s.add_constraint(eq(rv["w"], (x1 - x0) * self.canvas_w))
            s.add_constraint(eq(rv["h"], (y1 - y0) * self.canvas_h))
            region = overlay.region
            if region.is_text:
                f = self.font_vars[region.id] = Variable(f"{region.id}.font")
                s.add_constraint(ge(f, MIN_FONT))
                s.add_constraint(eq(f, self._push, strength=MEDIUM))

        for fc in self.blueprint.constraints:
            big = self.font_vars.get(fc.larger)
            small = self.font_vars.get(fc.smaller)
            if big is None or small is None:
                continue
            if fc.kind == "font_ratio":
                s.add_constraint(ge(big, fc.min_ratio * small))
                s.add_constraint(le(big, fc.max_ratio * small))
            elif fc.kind == "font_equal":
                s.add_constraint(eq(big, small))

    def _swap(self, slot: str, constraints: list) -> bool:
        """Replace the active constraint group ``slot``; False if infeasible."""
        current = self._active.setdefault(slot, [])
        for c in current:
            self.solver.remove_constraint(c)
        current.clear()
        try:
            for c in constraints:
                self.solver.add_constraint(c)
                current.append(c)
        except Infeasible:
            for c in current:
                self.solver.remove_constraint(c)
            current.clear()
            return False
        return True

    def set_text_fits(self, breakings: dict[str, LineBreaking]) -> bool:
        fit = []
        for rid, breaking in breakings.items():
            f = self.font_vars[rid]
            rv = self.rect_vars[rid]
            fit.append(le(f * breaking.max_width, rv["w"] - 2 * PAD))
            fit.append(le(f * breaking.height, rv["h"] - 2 * PAD))
        return self._swap("text", fit)

    def set_graphic_fits(self, graphic_choice: dict[str, GraphicSpec]) -> bool:
        fit = []
        for rid, spec in graphic_choice.items():
            if spec.kind is GraphicKind.BACKGROUND:
                continue
            g = self.scale_vars[rid]
            rv = self.rect_vars[rid]
            fit.append(le(g * spec.aspect, rv["w"] - 2 * PAD))
            fit.append(le(g, rv["h"] - 2 * PAD))
        return self._swap("graphic", fit)

    def extract(self, font, breakings, graphic_choice) -> SolvedLayout:
        s = self.solver
        regions: dict[str, Rect] = {}
        for region in self.blueprint.regions():
            rv = self.rect_vars[region.id]
            regions[region.id] = Rect(*(s.value(rv[k]) for k in ("x", "y", "w", "h")))

        texts: dict[str, TextLayout] = {}
        for rid, breaking in breakings.items():
            size = s.value(self.font_vars[rid])
            region = regions[rid]
            bw, bh = breaking.max_width * size, breaking.height * size
            region_def = next(r for r in self.blueprint.regions() if r.id == rid)
            if region_def.align == "left":
                bx = region.x + PAD
            else:
                bx = region.x + (region.w - bw) / 2
            by = region.y + (region.h - bh) / 2
            texts[rid] = TextLayout(
                region_id=rid,
                text=" ".join(breaking.words),
                lines=tuple(breaking.texts()),
                line_widths=tuple(w * size for w in breaking.widths),
                font_family=font.family,
                size=size,
                block=Rect(bx, by, bw, bh),
                align=region_def.align,
            )

        graphics: dict[str, GraphicLayout] = {}
        for rid, spec in graphic_choice.items():
            region = regions[rid]
            if spec.kind is GraphicKind.BACKGROUND:
                inner = region.inset(PAD)
                gh = min(inner.h, inner.w / spec.aspect)
                gw = gh * spec.aspect
                rect = Rect(region.x + (region.w - gw) / 2, region.y + (region.h - gh) / 2, gw, gh)
            else:
                gh = s.value(self.scale_vars[rid])
                gw = gh * spec.aspect
                rect = Rect(region.x + (region.w - gw) / 2, region.y + (region.h - gh) / 2, gw, gh)
            graphics[rid] = GraphicLayout(region_id=rid, spec=spec, rect=rect)

        objective = sum(t.block.area for t in texts.values()) + sum(
            g.rect.area for g in graphics.values()
        )
        return SolvedLayout(
            canvas_w=self.canvas_w,
            canvas_h=self.canvas_h,
            regions=regions,
            texts=texts,
            graphics=graphics,
            font_family=font.family,
            objective=objective,
        )


def solve_all(
    blueprint: Blueprint,
    contents: dict[str, TextContent | GraphicContent],
    fonts: dict[str, FontMetrics] | None = None,
) -> dict[tuple, SolvedLayout]:
    """Best feasible layout per graphic-kind combination.

    Iterates fonts x line breakings x graphic options; for every
    combination of graphic kinds across graphic regions (a candidate
    dimension of its own) the maximum-area feasible layout is kept.
    Returns an empty dict when nothing is feasible.
    """
    fonts = fonts or bundled_fonts()
    problem = _Problem(blueprint, contents)

    text_regions = [r for r in blueprint.regions() if r.is_text]
    graphic_regions = [
        r for r in blueprint.regions() if r.slot is SlotKind.GRAPHIC and r.id in contents
    ]

    best: dict[tuple, SolvedLayout] = {}
    meta: dict[tuple, tuple] = {}
    graphic_opt_lists = [list(contents[r.id].options) for r in graphic_regions]
    for family in sorted(fonts):
        font = fonts[family]
        per_region_breakings: list[list[LineBreaking]] = []
        for region in text_regions:
            content = contents[region.id]
            n_words = len(content.text.split())
            options = [
                break_lines(content.text, font, l)
                for l in range(1, min(region.max_lines, n_words) + 1)
            ]
            per_region_breakings.append(options)

        for breaking_combo in product(*per_region_breakings):
            breakings = {r.id: b for r, b in zip(text_regions, breaking_combo)}
            if not problem.set_text_fits(breakings):
                continue
            for graphic_combo in product(*graphic_opt_lists):
                per_fact_kinds = {
                    g.kind for r, g in zip(graphic_regions, graphic_combo)
                    if r.fact_index is not None
                }
                if len(per_fact_kinds) > 1:
                    continue  # repeated fact slots keep one coherent graphic kind
                choice = {r.id: g for r, g in zip(graphic_regions, graphic_combo)}
                if not problem.set_graphic_fits(choice):
                    continue
                layout = problem.extract(font, breakings, choice)
                kinds = tuple(
                    (r.id, g.kind.value) for r, g in zip(graphic_regions, graphic_combo)
                )
                incumbent = best.get(kinds)
                if incumbent is None or layout.objective > incumbent.objective + CHECK_TOL:
                    best[kinds] = layout
                    meta[kinds] = (family, tuple(b.line_count for b in breaking_combo),
                                   tuple(g.key() for g in graphic_combo))

    for kinds, layout in best.items():
        family, line_counts, graphic_keys = meta[kinds]
        layout.choices.update(
            font_family=family, line_counts=line_counts,
            graphic_keys=graphic_keys, graphic_kinds=kinds,
        )
    return best


def solve(
    blueprint: Blueprint,
    contents: dict[str, TextContent | GraphicContent],
    fonts: dict[str, FontMetrics] | None = None,
) -> SolvedLayout:
    """Single best feasible layout across every discrete combination.

    Raises Infeasible when no combination satisfies the required
    constraints.
    """
    per_kind = solve_all(blueprint, contents, fonts)
    if not per_kind:
        raise Infeasible(f"blueprint {blueprint.id}: no feasible combination")
    return max(per_kind.values(), key=lambda l: l.objective)


# ---------------------------------------------------------------------------
# independent post-hoc checker
# ---------------------------------------------------------------------------


def check_layout(
    blueprint: Blueprint,
    layout: SolvedLayout,
    fonts: dict[str, FontMetrics] | None = None,
    facts=None,
) -> list[str]:
    """Re-validate every required constraint from the solved numbers alone."""
    fonts = fonts or bundled_fonts()
    problems: list[str] = []
    canvas = Rect(0, 0, layout.canvas_w, layout.canvas_h)

    def rect_of(node: Node) -> Rect | None:
        if node.region is not None:
            return layout.regions.get(node.region.id)
        rects = [rect_of(c.node) for c in node.children]
        if any(r is None for r in rects):
            return None
        x = min(r.x for r in rects)
        y = min(r.y for r in rects)
        return Rect(x, y, max(r.x + r.w for r in rects) - x, max(r.y + r.h for r in rects) - y)

    def walk(node: Node) -> None:
        if node.region is not None:
            return
        parent = rect_of(node)
        along, across, pos_along, pos_across = (
            ("w", "h", "x", "y") if node.split == "h" else ("h", "w", "y", "x")
        )
        cursor = getattr(parent, pos_along)
        for child in node.children:
            r = rect_of(child.node)
            if r is None:
                problems.append(f"missing rect under split {node.split}")
                return
            if abs(getattr(r, pos_along) - cursor) > 1e-4:
                problems.append(f"tiling gap at {getattr(r, pos_along):.3f} vs {cursor:.3f}")
            if abs(getattr(r, across) - getattr(parent, across)) > 1e-4:
                problems.append(f"child does not span parent across split")
            cursor = getattr(r, pos_along) + getattr(r, along)
            if child.min_frac is not None and getattr(r, along) < child.min_frac * getattr(parent, along) - 1e-4:
                problems.append(f"child below min fraction in {blueprint.id}")
            if child.max_frac is not None and getattr(r, along) > child.max_frac * getattr(parent, along) + 1e-4:
                problems.append(f"child above max fraction in {blueprint.id}")
            walk(child.node)
        if abs(cursor - (getattr(parent, pos_along) + getattr(parent, along))) > 1e-4:
            problems.append(f"children do not tile parent along {node.split}")

    root_rect = rect_of(blueprint.tree)
    if root_rect is None:
        problems.append("missing region rects")
        return problems
    for dim_got, dim_want, name in (
        (root_rect.x, 0.0, "x"), (root_rect.y, 0.0, "y"),
        (root_rect.w, layout.canvas_w, "w"), (root_rect.h, layout.canvas_h, "h"),
    ):
        if abs(dim_got - dim_want) > 1e-4:
            problems.append(f"root {name}: {dim_got:.3f} != {dim_want:.3f}")
    walk(blueprint.tree)

    for rid, rect in layout.regions.items():
        if not canvas.contains(rect, tol=1e-4):
            problems.append(f"region {rid} escapes canvas")

    tree_leaves = {r.id for r in _leaf_regions(blueprint.tree)}
    leaf_ids = [rid for rid in layout.regions if rid in tree_leaves]
    for i, a in enumerate(leaf_ids):
        for b in leaf_ids[i + 1 :]:
            if layout.regions[a].overlaps(layout.regions[b], tol=1e-4):
                problems.append(f"regions {a} and {b} overlap")

    for rid, text in layout.texts.items():
        region = layout.regions[rid]
        font = fonts[text.font_family]
        if text.size < MIN_FONT - CHECK_TOL:
            problems.append(f"text {rid} below minimum font size: {text.size:.3f}")
        if not region.inset(PAD).contains(text.block, tol=1e-4):
            problems.append(f"text block {rid} escapes its padded region")
        for line, width in zip(text.lines, text.line_widths):
            measured = font.text_width(line, text.size)
            if abs(measured - width) > TEXT_OVERFLOW_TOL:
                problems.append(f"text {rid} line width mismatch: {measured:.3f} vs {width:.3f}")
            if measured > region.w - 2 * PAD + TEXT_OVERFLOW_TOL:
                problems.append(f"text {rid} overflows region: {measured:.3f} > {region.w - 2*PAD:.3f}")

    for rid, graphic in layout.graphics.items():
        region = layout.regions[rid]
        if not region.inset(PAD - 1e-6).contains(graphic.rect, tol=1e-4):
            problems.append(f"graphic {rid} escapes its padded region")

    for fc in blueprint.constraints:
        big = layout.texts.get(fc.larger)
        small = layout.texts.get(fc.smaller)
        if big is None or small is None:
            continue
        if fc.kind == "font_ratio":
            if big.size < fc.min_ratio * small.size - 1e-4:
                problems.append(
                    f"font ratio below {fc.min_ratio}: {big.size:.3f} vs {small.size:.3f}"
                )
            if big.size > fc.max_ratio * small.size + 1e-4:
                problems.append(
                    f"font ratio above {fc.max_ratio}: {big.size:.3f} vs {small.size:.3f}"
                )
        elif fc.kind == "font_equal" and abs(big.size - small.size) > 1e-4:
            problems.append(f"fonts differ: {fc.larger}={big.size:.3f} {fc.smaller}={small.size:.3f}")

    if facts is not None:
        for graphic in layout.graphics.values():
            picto = graphic.spec.pictograph
            if picto is None or graphic.spec.fact_index is None:
                continue
            value = facts[graphic.spec.fact_index].value
            bound = 1.0 / (2 * picto.count) + 1e-9
            if abs(picto.filled_fraction - value) > bound:
                problems.append(
                    f"pictograph fill {picto.filled_fraction:.4f} vs value {value:.4f}"
                )

    return problems
