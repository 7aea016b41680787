"""Blueprint data model: declarative region trees with slots and constraints.

Blueprints are JSON files. A tree node either splits horizontally or
vertically into flexible children, or is a leaf region with a content
slot. A child marked ``"repeat": "facts"`` is cloned once per fact at
instantiation time (region ids gain a ``:i`` suffix). Overlay regions
sit on top of the tree at fixed canvas fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .charts import GraphicKind
from .errors import ParseError
from .facts import Relation
from .resources import data_path

CANVAS_HEIGHT = 360.0


class SlotKind(Enum):
    GRAPHIC = "graphic"
    NUMBER = "number"
    MODIFIER = "modifier"
    DESCRIPTION = "description"
    TITLE = "title"
    OVERLAY_BACKGROUND = "overlay_background"


@dataclass(frozen=True)
class Region:
    id: str
    slot: SlotKind
    forms: tuple[str, ...] = ()  # for description slots: first derivable form wins
    graphic_types: tuple[GraphicKind, ...] = ()
    max_lines: int = 1
    fact_index: int | None = None  # bound fact for repeated subtrees
    align: str = "center"

    @property
    def is_text(self) -> bool:
        return self.slot in (SlotKind.NUMBER, SlotKind.MODIFIER, SlotKind.DESCRIPTION, SlotKind.TITLE)


@dataclass(frozen=True)
class Node:
    """Internal split or leaf region."""

    split: str | None = None  # "h" | "v" | None for leaf
    children: tuple["Child", ...] = ()
    region: Region | None = None


@dataclass(frozen=True)
class Child:
    node: Node
    flex: float = 1.0
    min_frac: float | None = None
    max_frac: float | None = None


@dataclass(frozen=True)
class Overlay:
    region: Region
    inset: tuple[float, float, float, float]  # x0, y0, x1, y1 canvas fractions


@dataclass(frozen=True)
class FontConstraint:
    kind: str  # "font_ratio" | "font_equal"
    larger: str
    smaller: str
    min_ratio: float = 1.0
    max_ratio: float = 1.0
    per_fact: bool = False


@dataclass(frozen=True)
class Admission:
    number_initial: bool = False  # statement must start with the number
    modifier_or_number_initial: bool = False
    min_facts: int = 1
    max_facts: int = 1


@dataclass(frozen=True)
class Blueprint:
    id: str
    aspect: tuple[float, float]  # w : h
    relations: tuple[Relation, ...]
    tree: Node
    overlays: tuple[Overlay, ...] = ()
    constraints: tuple[FontConstraint, ...] = ()
    admission: Admission = field(default_factory=Admission)

    @property
    def canvas_size(self) -> tuple[float, float]:
        w, h = self.aspect
        return CANVAS_HEIGHT * w / h, CANVAS_HEIGHT

    def regions(self) -> list[Region]:
        out = [o.region for o in self.overlays]

        def walk(node: Node):
            if node.region is not None:
                out.append(node.region)
            for child in node.children:
                walk(child.node)

        walk(self.tree)
        return out

    def required_slots(self) -> list[Region]:
        return self.regions()

    def accepts_relation(self, relation: Relation) -> bool:
        if relation in self.relations:
            return True
        # comparison layouts also fit accumulation groups, not vice versa
        return relation is Relation.ACCUMULATION and Relation.COMPARISON in self.relations


def _slot_of(raw: dict) -> SlotKind:
    return SlotKind(raw["slot"])


def _region_from_json(raw: dict) -> tuple[Region, bool]:
    forms = raw.get("form", ())
    if isinstance(forms, str):
        forms = (forms,)
    slot = _slot_of(raw)
    default_lines = {SlotKind.DESCRIPTION: 6, SlotKind.TITLE: 2}.get(slot, 1)
    region = Region(
        id=raw["id"],
        slot=slot,
        forms=tuple(forms),
        graphic_types=tuple(GraphicKind(t) for t in raw.get("graphic_types", ())),
        max_lines=int(raw.get("max_lines", default_lines)),
        align=raw.get("align", "center"),
    )
    return region, bool(raw.get("per_fact", False))


def _build_node(raw: dict, fact_count: int, fact_index: int | None) -> Node:
    if "region" in raw:
        region, _ = _region_from_json(raw["region"])
        if fact_index is not None:
            region = replace(region, id=f"{region.id}:{fact_index}", fact_index=fact_index)
        return Node(region=region)
    if "split" not in raw:
        raise ParseError(f"node needs 'split' or 'region': {raw}")
    children: list[Child] = []
    for child_raw in raw["children"]:
        repeat = child_raw.get("repeat") == "facts"
        indices = range(fact_count) if repeat else [fact_index]
        for idx in indices:
            node = _build_node(child_raw, fact_count, idx)
            children.append(
                Child(
                    node=node,
                    flex=float(child_raw.get("flex", 1.0)),
                    min_frac=child_raw.get("min"),
                    max_frac=child_raw.get("max"),
                )
            )
    return Node(split=raw["split"], children=tuple(children))


def _constraints_from_json(raw_list: list[dict], fact_count: int) -> tuple[FontConstraint, ...]:
    out: list[FontConstraint] = []
    for raw in raw_list:
        if raw["type"] == "font_equal_facts":
            # one region name, equalized across all fact instances
            for i in range(fact_count - 1):
                out.append(
                    FontConstraint(
                        kind="font_equal",
                        larger=f"{raw['region']}:{i}",
                        smaller=f"{raw['region']}:{i + 1}",
                    )
                )
            continue
        base = FontConstraint(
            kind=raw["type"],
            larger=raw.get("larger", raw.get("a", "")),
            smaller=raw.get("smaller", raw.get("b", "")),
            min_ratio=float(raw.get("min", 1.0)),
            max_ratio=float(raw.get("max", 1.0)),
            per_fact=bool(raw.get("per_fact", False)),
        )
        if base.per_fact:
            for i in range(fact_count):
                out.append(
                    replace(base, larger=f"{base.larger}:{i}", smaller=f"{base.smaller}:{i}", per_fact=False)
                )
        else:
            out.append(base)
    return tuple(out)


def load_blueprint(path: str | Path, fact_count: int = 1) -> Blueprint:
    """Load and instantiate a blueprint for a concrete fact count."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        admission_raw = raw.get("admission", {})
        admission = Admission(
            number_initial=bool(admission_raw.get("number_initial", False)),
            modifier_or_number_initial=bool(admission_raw.get("modifier_or_number_initial", False)),
            min_facts=int(admission_raw.get("min_facts", 1)),
            max_facts=int(admission_raw.get("max_facts", 1)),
        )
        overlays = []
        for raw_overlay in raw.get("overlays", ()):
            region, _ = _region_from_json(raw_overlay["region"])
            overlays.append(Overlay(region=region, inset=tuple(raw_overlay["inset"])))
        bp = Blueprint(
            id=raw["id"],
            aspect=(float(raw["aspect"][0]), float(raw["aspect"][1])),
            relations=tuple(Relation(r) for r in raw["relations"]),
            tree=_build_node(raw["tree"], fact_count, None),
            overlays=tuple(overlays),
            constraints=_constraints_from_json(raw.get("constraints", ()), fact_count),
            admission=admission,
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"{path}: {exc!r}") from exc

    ids = [r.id for r in bp.regions()]
    if len(ids) != len(set(ids)):
        raise ParseError(f"{path}: duplicate region ids {ids}")
    return bp


def bundled_blueprint_paths() -> list[Path]:
    return sorted(data_path("blueprints").glob("*.json"))


def load_bundled_blueprints(fact_count: int = 1) -> list[Blueprint]:
    """All bundled blueprints whose admission covers ``fact_count``."""
    out = []
    for path in bundled_blueprint_paths():
        raw = json.loads(path.read_text(encoding="utf-8"))
        admission = raw.get("admission", {})
        lo = int(admission.get("min_facts", 1))
        hi = int(admission.get("max_facts", 1))
        if lo <= fact_count <= hi:
            out.append(load_blueprint(path, fact_count))
    return out
