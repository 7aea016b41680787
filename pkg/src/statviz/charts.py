"""Data-driven graphic geometry: pictograph grids, pie/donut sectors, bars.

Everything here is resolution-independent: shapes are described in unit
terms plus an intrinsic aspect ratio; the layout engine scales them and
the renderer turns them into SVG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import AccumulationOverflow
from .facts import ProportionFact, Relation

GRID_GAP = 0.18  # gap between pictograph cells, as a fraction of cell size
DONUT_INNER_RATIO = 0.6
BAR_TRACK_ASPECT = 4.0  # width : height of a single bar track
BAR_GAP_RATIO = 0.35  # vertical gap between stacked bars, in bar heights
FILL_EPS = 1e-9


class GraphicKind(Enum):
    PICTOGRAPH = "pictograph"
    ADORNMENT = "adornment"
    DONUT = "donut"
    PIE = "pie"
    BAR = "bar"
    FILLED_ICON = "filled_icon"
    SCALED_ICON = "scaled_icon"
    BACKGROUND = "background"


ICON_KINDS = frozenset(
    {GraphicKind.PICTOGRAPH, GraphicKind.ADORNMENT, GraphicKind.FILLED_ICON,
     GraphicKind.SCALED_ICON, GraphicKind.BACKGROUND}
)
CHART_KINDS = frozenset({GraphicKind.DONUT, GraphicKind.PIE, GraphicKind.BAR})


@dataclass(frozen=True)
class PictographOption:
    rows: int
    cols: int
    filled_full: int  # fully filled icons
    partial_fraction: float  # fill fraction of the next icon, 0 when none
    icon_aspect: float

    @property
    def count(self) -> int:
        return self.rows * self.cols

    @property
    def aspect(self) -> float:
        width = self.cols * self.icon_aspect * (1 + GRID_GAP) - GRID_GAP * self.icon_aspect
        height = self.rows * (1 + GRID_GAP) - GRID_GAP
        return width / height

    @property
    def filled_fraction(self) -> float:
        return (self.filled_full + self.partial_fraction) / self.count


def pictograph_options(fact: ProportionFact, icon_aspect: float = 0.5) -> list[PictographOption]:
    """Grid choices for one fact: the exact m-in-n grid when n <= 10, plus
    the standard 2x5 / 1x5 / 1x10 grids with partial fill."""
    options: list[PictographOption] = []
    seen: set[tuple] = set()

    def add(rows: int, cols: int, full: int, partial: float):
        key = (rows, cols, full, round(partial, 9))
        if key not in seen:
            seen.add(key)
            options.append(PictographOption(rows, cols, full, partial, icon_aspect))

    if fact.denominator is not None and fact.denominator <= 10:
        n, m = fact.denominator, fact.numerator
        if n <= 6 or n % 2 == 1:
            add(1, n, m, 0.0)
        else:
            add(2, n // 2, m, 0.0)

    for rows, cols in ((2, 5), (1, 5), (1, 10)):
        count = rows * cols
        exact = fact.value * count
        full = int(math.floor(exact + FILL_EPS))
        partial = exact - full
        if partial < FILL_EPS:
            partial = 0.0
        add(rows, cols, full, partial)

    return options


@dataclass(frozen=True)
class Sector:
    start_angle: float  # degrees clockwise from 12 o'clock
    end_angle: float
    color_role: str  # resolved against the palette by the renderer
    label: str = ""


@dataclass(frozen=True)
class Bar:
    y: float  # top, in unit bar heights
    height: float
    fraction: float  # fill width / track width
    color_role: str
    label: str = ""


@dataclass(frozen=True)
class ChartGeometry:
    kind: GraphicKind
    aspect: float
    sectors: tuple[Sector, ...] = ()
    bars: tuple[Bar, ...] = ()
    inner_ratio: float = 0.0  # donut hole, fraction of outer radius


def series_role(index: int) -> str:
    return "series0" if index == 0 else f"series{index}"


def chart_geometry(
    kind: GraphicKind,
    facts: list[ProportionFact],
    relation: Relation = Relation.SINGLE,
    inner_ratio: float = DONUT_INNER_RATIO,
) -> ChartGeometry:
    """Sector/bar description for pie, donut, or bar charts.

    Pie and donut sectors start at 12 o'clock and run clockwise, the
    highlighted (first) value first; a remainder sector completes the
    circle. Accumulated facts must not sum above 1.
    """
    if kind in (GraphicKind.PIE, GraphicKind.DONUT):
        total = sum(f.value for f in facts)
        if len(facts) > 1 and total > 1 + 1e-6:
            raise AccumulationOverflow(f"sector values sum to {total:.6f} > 1")
        sectors = []
        angle = 0.0
        for i, fact in enumerate(facts):
            sweep = fact.value * 360.0
            sectors.append(Sector(angle, angle + sweep, series_role(i), fact.surface_number))
            angle += sweep
        if angle < 360.0 - 1e-6:
            sectors.append(Sector(angle, 360.0, "remainder", ""))
        return ChartGeometry(
            kind=kind,
            aspect=1.0,
            sectors=tuple(sectors),
            inner_ratio=inner_ratio if kind is GraphicKind.DONUT else 0.0,
        )

    if kind is GraphicKind.BAR:
        bars = []
        y = 0.0
        for i, fact in enumerate(facts):
            bars.append(Bar(y, 1.0, fact.value, series_role(i), fact.surface_number))
            y += 1.0 + BAR_GAP_RATIO
        height = y - BAR_GAP_RATIO
        return ChartGeometry(kind=kind, aspect=BAR_TRACK_ASPECT / height, bars=tuple(bars))

    raise ValueError(f"{kind} is not a chart kind")


@dataclass(frozen=True)
class GraphicSpec:
    """One enumerable graphic option for a layout slot."""

    kind: GraphicKind
    aspect: float
    icon_id: str | None = None
    pictograph: PictographOption | None = None
    chart: ChartGeometry | None = None
    fill_fraction: float = 0.0  # for filled/scaled icons
    fill_direction: str = "ltr"
    fact_index: int | None = None

    def key(self) -> tuple:
        return (
            self.kind.value,
            self.icon_id,
            self.pictograph and (self.pictograph.rows, self.pictograph.cols,
                                 self.pictograph.filled_full,
                                 round(self.pictograph.partial_fraction, 9)),
            round(self.aspect, 9),
            round(self.fill_fraction, 9),
            self.fact_index,
        )
