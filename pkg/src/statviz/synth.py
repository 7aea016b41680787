"""Candidate synthesis: enumerate, filter, solve, score, and rank.

Enumeration walks blueprint x icon x palette, rules out blueprints whose
required slots cannot be filled (recording why), enforces icon
applicability flags per graphic type, solves each surviving layout, and
drops infeasible ones. Scoring implements the three quality metrics:

  semantic    mean match similarity of displayed icons and palette
  visual      displayed element area / canvas area
  informative covered fraction of the statement's non-stop words

ranked by the weighted total (default weights 0.25 / 0.5 / 0.25).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .assets import AssetLibrary, IconAsset, MatchResult, non_stop_words
from .blueprints import Blueprint, Region, SlotKind, load_bundled_blueprints
from .charts import (
    CHART_KINDS,
    ChartGeometry,
    GraphicKind,
    GraphicSpec,
    chart_geometry,
    pictograph_options,
)
from .errors import Infeasible, InvariantViolation, MissingAsset, NoCandidates, RefineViolation
from .facts import DescriptionSet, FactGroup, ProportionFact, Relation, extract_descriptions
from .layout import GraphicContent, SolvedLayout, TextContent, check_layout, solve_all
from .textmetrics import bundled_fonts
from .tokenizer import TokenKind, tokenize

DEFAULT_WEIGHTS = (0.25, 0.5, 0.25)
DEFAULT_LIMITS = {"icons": 3, "palettes": 3}


@dataclass(frozen=True)
class RankingWeights:
    semantic: float = DEFAULT_WEIGHTS[0]
    visual: float = DEFAULT_WEIGHTS[1]
    informative: float = DEFAULT_WEIGHTS[2]

    def __post_init__(self):
        if self.semantic < 0 or self.visual < 0 or self.informative < 0:
            raise ValueError("ranking weights must be non-negative")

    def total(self, semantic: float, visual: float, informative: float) -> float:
        return self.semantic * semantic + self.visual * visual + self.informative * informative


@dataclass(frozen=True)
class Scores:
    semantic: float
    visual: float
    informative: float
    total: float

    def to_dict(self) -> dict[str, float]:
        return {
            "semantic": self.semantic,
            "visual": self.visual,
            "informative": self.informative,
            "total": self.total,
        }


@dataclass
class Candidate:
    id: str
    blueprint: Blueprint
    group: FactGroup
    relation: Relation  # relation VARIANT this candidate renders
    descriptions: tuple[DescriptionSet, ...]  # one per fact
    icons: dict[str, str]  # graphic region id -> icon id (icon-bearing slots)
    icon_matches: dict[str, MatchResult]
    palette_id: str
    palette_match: MatchResult | None
    layout: SolvedLayout
    scores: Scores | None = None
    parent_id: str | None = None

    @property
    def statement(self) -> str:
        return self.group.statement

    def manifest(self) -> dict:
        return {
            "id": self.id,
            "blueprint": self.blueprint.id,
            "relation": self.relation.value,
            "icons": dict(sorted(self.icons.items())),
            "palette": self.palette_id,
            "font": self.layout.font_family,
            "scores": self.scores.to_dict() if self.scores else None,
            "parent": self.parent_id,
        }


# ---------------------------------------------------------------------------
# slot content assembly
# ---------------------------------------------------------------------------


def icon_allowed(kind: GraphicKind, icon: IconAsset) -> str | None:
    """None when the icon may serve this graphic kind, else the broken rule."""
    if kind is GraphicKind.PICTOGRAPH:
        if not icon.pictograph_ok:
            return "pictograph_ok"
        if icon.represents.value == "part":
            return "represents_part_not_pictograph"
    elif kind is GraphicKind.FILLED_ICON:
        if icon.hollow:
            return "hollow_not_fillable"
        if not icon.fillable:
            return "fillable"
    elif kind is GraphicKind.BACKGROUND:
        if not icon.background_ok:
            return "background_ok"
    return None


def graphic_options_for(
    region: Region,
    group: FactGroup,
    relation: Relation,
    icon: IconAsset | None,
) -> list[GraphicSpec]:
    """All graphic specs this region can hold with the given icon."""
    facts = group.facts
    fact_idx = region.fact_index if region.fact_index is not None else 0
    fact = facts[fact_idx]
    options: list[GraphicSpec] = []
    for kind in region.graphic_types:
        if kind in CHART_KINDS:
            if kind in (GraphicKind.PIE, GraphicKind.DONUT):
                chart_facts = list(facts) if region.fact_index is None else [fact]
                if len(chart_facts) > 1 and relation is not Relation.ACCUMULATION:
                    continue  # combined circular charts only for accumulation
                if sum(f.value for f in chart_facts) > 1 + 1e-6:
                    continue
                chart = chart_geometry(kind, chart_facts, relation)
            else:
                chart_facts = list(facts) if region.fact_index is None else [fact]
                chart = chart_geometry(kind, chart_facts, relation)
            options.append(
                GraphicSpec(kind=kind, aspect=chart.aspect, chart=chart,
                            fact_index=region.fact_index)
            )
            continue
        if icon is None or icon_allowed(kind, icon) is not None:
            continue
        if kind is GraphicKind.PICTOGRAPH:
            for picto in pictograph_options(fact, icon.aspect):
                options.append(
                    GraphicSpec(kind=kind, aspect=picto.aspect, icon_id=icon.id,
                                pictograph=picto, fact_index=fact_idx)
                )
        elif kind is GraphicKind.FILLED_ICON:
            options.append(
                GraphicSpec(kind=kind, aspect=icon.aspect, icon_id=icon.id,
                            fill_fraction=fact.value, fill_direction=icon.fill_direction,
                            fact_index=fact_idx)
            )
        elif kind is GraphicKind.SCALED_ICON:
            options.append(
                GraphicSpec(kind=kind, aspect=icon.aspect, icon_id=icon.id,
                            fill_fraction=fact.value, fact_index=fact_idx)
            )
        elif kind is GraphicKind.ADORNMENT:
            options.append(GraphicSpec(kind=kind, aspect=icon.aspect, icon_id=icon.id))
        elif kind is GraphicKind.BACKGROUND:
            options.append(GraphicSpec(kind=kind, aspect=icon.aspect, icon_id=icon.id))
    return options


def admission_passes(blueprint: Blueprint, descriptions: tuple[DescriptionSet, ...]) -> str | None:
    d0 = descriptions[0]
    if blueprint.admission.number_initial and d0.before_number:
        return "statement must start with the number"
    if blueprint.admission.modifier_or_number_initial:
        before = d0.before_number.strip().lower()
        modifier = (d0.modifier or "").strip().lower()
        if before and before != modifier:
            return "statement must start with the number or its modifier"
    return None


def build_contents(
    blueprint: Blueprint,
    group: FactGroup,
    relation: Relation,
    descriptions: tuple[DescriptionSet, ...],
    icon: IconAsset | None,
) -> dict[str, TextContent | GraphicContent] | str:
    """Slot contents for one blueprint, or a rule-out reason string."""
    contents: dict[str, TextContent | GraphicContent] = {}
    for region in blueprint.regions():
        fact_idx = region.fact_index if region.fact_index is not None else 0
        fact = group.facts[fact_idx]
        desc = descriptions[fact_idx]
        if region.slot is SlotKind.NUMBER:
            contents[region.id] = TextContent(fact.surface_number)
        elif region.slot is SlotKind.MODIFIER:
            if not fact.modifier:
                return f"region {region.id}: statement has no modifier"
            contents[region.id] = TextContent(fact.modifier)
        elif region.slot is SlotKind.TITLE:
            if not fact.whole:
                return f"region {region.id}: statement has no whole to use as title"
            contents[region.id] = TextContent(fact.whole)
        elif region.slot is SlotKind.DESCRIPTION:
            forms = desc.forms()
            text = next((forms[f] for f in region.forms if f in forms), None)
            if text is None:
                return f"region {region.id}: no {'/'.join(region.forms)} description available"
            contents[region.id] = TextContent(text)
        elif region.slot is SlotKind.GRAPHIC:
            options = graphic_options_for(region, group, relation, icon)
            if not options:
                want = "/".join(k.value for k in region.graphic_types)
                return f"region {region.id}: no usable {want} graphic"
            contents[region.id] = GraphicContent(tuple(options))
    return contents


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _relation_variants(group: FactGroup, blueprint: Blueprint) -> list[Relation]:
    """Relation variants this blueprint renders for the group.

    Accumulation-eligible groups yield accumulation candidates on
    accumulation blueprints and comparison candidates on comparison
    blueprints (comparison visuals suit accumulation; not vice versa).
    """
    if group.relation is Relation.ACCUMULATION:
        return [r for r in (Relation.ACCUMULATION, Relation.COMPARISON) if r in blueprint.relations]
    return [group.relation] if group.relation in blueprint.relations else []


def enumerate_candidates(
    group: FactGroup,
    assets: AssetLibrary,
    blueprints: list[Blueprint] | None = None,
    limits: dict | None = None,
) -> tuple[list[Candidate], list[str]]:
    """(unscored candidates, rule-out diagnostics) for a fact group."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    statement = group.statement
    descriptions = tuple(extract_descriptions(f.statement, f) for f in group.facts)

    query_words: list[str] = []
    for fact in group.facts:
        for text in (fact.part, fact.whole):
            if text:
                query_words.extend(non_stop_words(text))
    seen = set()
    query_words = [w for w in query_words if not (w in seen or seen.add(w))]

    icon_matches = assets.match_icons(query_words, k=limits["icons"])
    palette_matches = assets.match_palettes(non_stop_words(statement), k=limits["palettes"])

    if blueprints is None:
        blueprints = load_bundled_blueprints(len(group.facts))

    fonts = bundled_fonts()
    candidates: list[Candidate] = []
    reasons: list[str] = []
    seq = 0
    layout_cache: dict[tuple, dict[tuple, SolvedLayout]] = {}
    emitted: set[tuple] = set()

    for blueprint in blueprints:
        variants = _relation_variants(group, blueprint)
        if not variants:
            reasons.append(f"{blueprint.id}: not suited to {group.relation.value} groups")
            continue
        for relation in variants:
            why = admission_passes(blueprint, descriptions)
            if why:
                reasons.append(f"{blueprint.id}: {why}")
                continue

            needs_icon = any(
                r.slot is SlotKind.GRAPHIC
                and set(r.graphic_types) - CHART_KINDS
                for r in blueprint.regions()
            )
            icon_choices: list[MatchResult | None] = list(icon_matches) or [None]
            if not needs_icon:
                icon_choices = [None]

            for icon_match in icon_choices:
                icon = assets.icon(icon_match.asset_id) if icon_match else None
                contents = build_contents(blueprint, group, relation, descriptions, icon)
                if isinstance(contents, str):
                    reasons.append(f"{blueprint.id}: {contents}")
                    continue

                cache_key = (
                    blueprint.id,
                    relation.value,
                    tuple(
                        (rid, c.text) if isinstance(c, TextContent)
                        else (rid, tuple(o.key() for o in c.options))
                        for rid, c in sorted(contents.items())
                    ),
                )
                if cache_key not in layout_cache:
                    layout_cache[cache_key] = solve_all(blueprint, contents, fonts)
                per_kind = layout_cache[cache_key]
                if not per_kind:
                    reasons.append(f"{blueprint.id}: layout infeasible")
                    continue

                for kinds, layout in per_kind.items():
                    used_icons: dict[str, str] = {}
                    used_matches: dict[str, MatchResult] = {}
                    for rid, glayout in layout.graphics.items():
                        if glayout.spec.icon_id:
                            used_icons[rid] = glayout.spec.icon_id
                            if icon_match:
                                used_matches[rid] = icon_match

                    for palette_match in palette_matches:
                        identity = (
                            blueprint.id, relation.value, kinds,
                            tuple(sorted(used_icons.items())), palette_match.asset_id,
                        )
                        if identity in emitted:
                            continue
                        emitted.add(identity)
                        candidates.append(
                            Candidate(
                                id=f"c{seq:03d}",
                                blueprint=blueprint,
                                group=group,
                                relation=relation,
                                descriptions=descriptions,
                                icons=used_icons,
                                icon_matches=used_matches,
                                palette_id=palette_match.asset_id,
                                palette_match=palette_match if palette_match.keyword else None,
                                layout=layout,
                                scores=None,
                            )
                        )
                        seq += 1

    if not candidates:
        raise NoCandidates(f"no valid infographic for {statement!r}", reasons)
    return candidates, reasons


# ---------------------------------------------------------------------------
# scoring
# ---------------------------------------------------------------------------


def displayed_words(candidate: Candidate) -> set[str]:
    """Case-folded words rendered anywhere in the candidate's texts."""
    words: set[str] = set()
    for text_layout in candidate.layout.texts.values():
        for tok in tokenize(text_layout.text):
            if tok.kind in (TokenKind.WORD, TokenKind.ABBREVIATION,
                            TokenKind.SPECIAL_PHRASE, TokenKind.NUMBER):
                words.add(tok.lower.strip("."))
    return words


def semantic_score(candidate: Candidate) -> float:
    sims: list[float] = []
    for match in candidate.icon_matches.values():
        sims.append(min(max(match.similarity, 0.0), 1.0))
    if candidate.palette_match is not None:
        sims.append(min(max(candidate.palette_match.similarity, 0.0), 1.0))
    if not sims:
        return 0.0
    return sum(sims) / len(sims)


def visual_score(candidate: Candidate) -> float:
    layout = candidate.layout
    area = sum(r.area for r in layout.element_rects())
    canvas = layout.canvas_w * layout.canvas_h
    return min(area / canvas, 1.0)


def informative_score(candidate: Candidate) -> float:
    statement_words = non_stop_words(candidate.statement)
    numbers = {
        t.lower for t in tokenize(candidate.statement) if t.kind is TokenKind.NUMBER
    }
    vocabulary = list(statement_words) + sorted(numbers)
    if not vocabulary:
        return 1.0
    shown = displayed_words(candidate)
    icon_words = {m.query_word for m in candidate.icon_matches.values()}
    covered = sum(1 for w in vocabulary if w in shown or w in icon_words)
    return covered / len(vocabulary)


def score(candidate: Candidate, weights: RankingWeights = RankingWeights()) -> Candidate:
    s = semantic_score(candidate)
    v = visual_score(candidate)
    i = informative_score(candidate)
    candidate.scores = Scores(s, v, i, weights.total(s, v, i))
    return candidate


def rank(
    candidates: list[Candidate],
    weights: RankingWeights = RankingWeights(),
    top_n: int | None = None,
) -> list[Candidate]:
    """Deterministic full ordering; the top-n head holds at most one
    candidate per (blueprint, relation) pair for variety."""
    for c in candidates:
        if c.scores is None:
            score(c, weights)

    # sort on the weight-normalized total so that scaling all weights by a
    # positive constant cancels exactly (argsort invariance, fp included)
    weight_sum = weights.semantic + weights.visual + weights.informative
    norm = (
        RankingWeights(weights.semantic / weight_sum, weights.visual / weight_sum,
                       weights.informative / weight_sum)
        if weight_sum > 0
        else RankingWeights(0.0, 0.0, 0.0)
    )
    ordered = sorted(
        candidates,
        key=lambda c: (
            -norm.total(c.scores.semantic, c.scores.visual, c.scores.informative),
            -c.scores.informative,
            -c.scores.semantic,
            c.blueprint.id,
            c.id,
        ),
    )
    if top_n is None:
        top_n = len(ordered)

    head: list[Candidate] = []
    tail: list[Candidate] = []
    taken: set[tuple[str, str]] = set()
    for c in ordered:
        key = (c.blueprint.id, c.relation.value)
        if len(head) < top_n and key not in taken:
            taken.add(key)
            head.append(c)
        else:
            tail.append(c)
    return head + tail


def validate_candidate(candidate: Candidate, assets: AssetLibrary) -> list[str]:
    """Post-hoc checks: layout constraints plus icon applicability flags."""
    problems = check_layout(candidate.blueprint, candidate.layout, facts=candidate.group.facts)
    for glayout in candidate.layout.graphics.values():
        spec = glayout.spec
        if spec.icon_id:
            rule = icon_allowed(spec.kind, assets.icon(spec.icon_id))
            if rule:
                problems.append(f"icon {spec.icon_id} breaks {rule} in {spec.kind.value} slot")
    return problems


def synthesize(
    group: FactGroup,
    assets: AssetLibrary,
    weights: RankingWeights = RankingWeights(),
    top_n: int | None = None,
    blueprints: list[Blueprint] | None = None,
    limits: dict | None = None,
) -> list[Candidate]:
    """Full pipeline tail: enumerate, score, rank."""
    candidates, _ = enumerate_candidates(group, assets, blueprints, limits)
    for c in candidates:
        score(c, weights)
    return rank(candidates, weights, top_n)


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------


def _statement_match(assets: AssetLibrary, keywords: tuple[str, ...], statement: str,
                     asset_id: str) -> MatchResult | None:
    """Best similarity of a user-chosen asset against the statement words."""
    words = non_stop_words(statement)
    if not words or not keywords:
        return None
    sim, word, keyword = assets._best_match(words, keywords)
    if sim < 0.0:
        return None
    return MatchResult(asset_id, float(sim), word, keyword)


def refine(
    parent: Candidate,
    assets: AssetLibrary,
    replace_spec: dict,
    new_id: str,
    weights: RankingWeights = RankingWeights(),
) -> Candidate:
    """Derive a new candidate from ``parent`` with one or more choices
    replaced (icon, palette, description form). Unspecified choices are
    preserved. Raises RefineViolation when the request breaks an icon
    applicability constraint or makes the layout unsolvable.
    """
    known = {"icon", "icon_slot", "palette", "description_form", "description_slot"}
    unknown = set(replace_spec) - known
    if unknown:
        raise ValueError(f"unknown replace keys: {sorted(unknown)}")

    blueprint = parent.blueprint
    group = parent.group
    descriptions = parent.descriptions
    regions = {r.id: r for r in blueprint.regions()}

    icon_slot = None
    new_icon = None
    if "icon" in replace_spec:
        graphic_slots = sorted(
            rid for rid, g in parent.layout.graphics.items() if g.spec.icon_id
        )
        icon_slot = replace_spec.get("icon_slot") or (graphic_slots[0] if graphic_slots else None)
        if icon_slot is None or icon_slot not in parent.layout.graphics:
            raise MissingAsset(f"candidate has no icon slot {replace_spec.get('icon_slot')!r}")
        new_icon = assets.icon(replace_spec["icon"])
        kind = parent.layout.graphics[icon_slot].spec.kind
        rule = icon_allowed(kind, new_icon)
        if rule:
            raise RefineViolation(rule, f"icon {new_icon.id!r} not usable as {kind.value}: {rule}")

    palette_id = parent.palette_id
    palette_match = parent.palette_match
    if "palette" in replace_spec:
        palette = assets.palette(replace_spec["palette"])
        palette_id = palette.id
        palette_match = _statement_match(assets, palette.keywords, parent.statement, palette.id)

    desc_slot = None
    new_form = None
    if "description_form" in replace_spec:
        desc_slots = sorted(
            rid for rid, r in regions.items() if r.slot is SlotKind.DESCRIPTION
        )
        desc_slot = replace_spec.get("description_slot") or (desc_slots[0] if desc_slots else None)
        if desc_slot is None or desc_slot not in regions:
            raise MissingAsset(f"candidate has no description slot {replace_spec.get('description_slot')!r}")
        new_form = replace_spec["description_form"]
        fact_idx = regions[desc_slot].fact_index or 0
        if new_form not in descriptions[fact_idx].forms():
            raise RefineViolation(
                "form_unavailable", f"description form {new_form!r} not derivable here"
            )

    needs_resolve = new_icon is not None or new_form is not None
    if needs_resolve:
        base_icon = None
        if parent.icons:
            base_icon = assets.icon(sorted(parent.icons.values())[0])
        contents = build_contents(blueprint, group, parent.relation, descriptions, base_icon)
        if isinstance(contents, str):
            raise RefineViolation("layout_infeasible", contents)
        # preserve unspecified choices: pin every graphic slot to the parent
        # spec; the replaced slot re-enumerates options of the same kind
        for rid, glayout in parent.layout.graphics.items():
            if rid == icon_slot and new_icon is not None:
                region = regions[rid]
                options = [
                    o for o in graphic_options_for(region, group, parent.relation, new_icon)
                    if o.kind is glayout.spec.kind
                ]
                if not options:
                    raise RefineViolation(
                        "no_graphic_option", f"{new_icon.id!r} yields no {glayout.spec.kind.value}"
                    )
                contents[rid] = GraphicContent(tuple(options))
            else:
                contents[rid] = GraphicContent((glayout.spec,))
        if desc_slot is not None and new_form is not None:
            fact_idx = regions[desc_slot].fact_index or 0
            contents[desc_slot] = TextContent(descriptions[fact_idx].forms()[new_form])

        per_kind = solve_all(blueprint, contents)
        wanted = tuple(
            (rid, parent.layout.graphics[rid].spec.kind.value)
            for rid in sorted(parent.layout.graphics)
        )
        layout = per_kind.get(wanted)
        if layout is None:
            raise RefineViolation("layout_infeasible", "no feasible layout for that choice")
    else:
        layout = parent.layout

    icons = dict(parent.icons)
    icon_matches = dict(parent.icon_matches)
    if new_icon is not None and icon_slot is not None:
        icons[icon_slot] = new_icon.id
        match = _statement_match(assets, new_icon.keywords, parent.statement, new_icon.id)
        if match is not None:
            icon_matches[icon_slot] = match
        else:
            icon_matches.pop(icon_slot, None)

    child = Candidate(
        id=new_id,
        blueprint=blueprint,
        group=group,
        relation=parent.relation,
        descriptions=descriptions,
        icons=icons,
        icon_matches=icon_matches,
        palette_id=palette_id,
        palette_match=palette_match,
        layout=layout,
        scores=None,
        parent_id=parent.id,
    )
    return score(child, weights)
