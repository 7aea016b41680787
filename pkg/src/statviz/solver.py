"""Incremental linear constraint solver (Cassowary-style dual-simplex tableau).

Supports adding and removing constraints with required/strong/medium/weak
priorities. Non-required constraints contribute error variables to the
objective, weighted by strength; required constraints either hold in
every returned solution or adding them raises Infeasible.

Pivot selection is deterministic: candidate symbols are always scanned
in ascending symbol id, so identical constraint sequences produce
identical tableaus and solutions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import Infeasible

EPS = 1e-8

REQUIRED = float("inf")
STRONG = 1_000_000.0
MEDIUM = 1_000.0
WEAK = 1.0

# Symbols are plain ints for speed: serial*4 | kind. Sorting by the int
# sorts by creation order, which keeps pivoting deterministic.
_EXTERNAL = 0
_SLACK = 1
_ERROR = 2
_DUMMY = 3


def _kind(sym: int) -> int:
    return sym & 3


def _pivotable(sym: int) -> bool:
    return sym & 3 in (_SLACK, _ERROR)


class Variable:
    _ids = itertools.count()

    def __init__(self, name: str = ""):
        self.name = name or f"v{next(self._ids)}"

    def __repr__(self):
        return f"Variable({self.name})"

    # sugar so constraints read naturally
    def __add__(self, other):
        return Expr.of(self) + other

    def __radd__(self, other):
        return Expr.of(self) + other

    def __sub__(self, other):
        return Expr.of(self) - other

    def __rsub__(self, other):
        return Expr.of(other) - self

    def __mul__(self, k):
        return Expr.of(self) * k

    def __rmul__(self, k):
        return Expr.of(self) * k

    def __neg__(self):
        return Expr.of(self) * -1.0


class Expr:
    """Linear expression: sum of coefficient*variable plus a constant."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: dict[Variable, float] | None = None, constant: float = 0.0):
        self.terms = dict(terms or {})
        self.constant = float(constant)

    @classmethod
    def of(cls, value) -> "Expr":
        if isinstance(value, Expr):
            return cls(value.terms, value.constant)
        if isinstance(value, Variable):
            return cls({value: 1.0})
        return cls({}, float(value))

    def _merge(self, other: "Expr", sign: float) -> "Expr":
        out = Expr(self.terms, self.constant)
        for var, coef in other.terms.items():
            out.terms[var] = out.terms.get(var, 0.0) + sign * coef
            if abs(out.terms[var]) < EPS:
                del out.terms[var]
        out.constant += sign * other.constant
        return out

    def __add__(self, other):
        return self._merge(Expr.of(other), 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._merge(Expr.of(other), -1.0)

    def __rsub__(self, other):
        return Expr.of(other)._merge(self, -1.0)

    def __mul__(self, k):
        k = float(k)
        return Expr({v: c * k for v, c in self.terms.items()}, self.constant * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


@dataclass(frozen=True)
class Constraint:
    """lhs (op) rhs with a priority; build via eq/le/ge helpers."""

    expr: Expr  # normalized to: expr (op) 0
    op: str  # "==", "<=", ">="
    strength: float = REQUIRED
    weight: float = 1.0
    tag: str = ""

    def __repr__(self):
        return f"Constraint({self.tag or id(self)}, {self.op}, s={self.strength})"


def _make(lhs, rhs, op, strength, weight, tag):
    return Constraint(Expr.of(lhs) - Expr.of(rhs), op, strength, weight, tag)


def eq(lhs, rhs, strength=REQUIRED, weight=1.0, tag=""):
    return _make(lhs, rhs, "==", strength, weight, tag)


def le(lhs, rhs, strength=REQUIRED, weight=1.0, tag=""):
    return _make(lhs, rhs, "<=", strength, weight, tag)


def ge(lhs, rhs, strength=REQUIRED, weight=1.0, tag=""):
    return _make(lhs, rhs, ">=", strength, weight, tag)


class _Row:
    __slots__ = ("cells", "constant")

    def __init__(self, constant: float = 0.0):
        self.cells: dict[int, float] = {}
        self.constant = float(constant)

    def copy(self) -> "_Row":
        row = _Row(self.constant)
        row.cells = dict(self.cells)
        return row

    def add(self, value: float) -> float:
        self.constant += value
        return self.constant

    def insert_symbol(self, sym: int, coef: float = 1.0) -> None:
        new = self.cells.get(sym, 0.0) + coef
        if abs(new) < EPS:
            self.cells.pop(sym, None)
        else:
            self.cells[sym] = new

    def insert_row(self, other: "_Row", coef: float = 1.0) -> None:
        self.constant += other.constant * coef
        cells = self.cells
        for sym, c in other.cells.items():  # hot path: inlined insert_symbol
            new = cells.get(sym, 0.0) + c * coef
            if -EPS < new < EPS:
                cells.pop(sym, None)
            else:
                cells[sym] = new

    def remove(self, sym: int) -> None:
        self.cells.pop(sym, None)

    def reverse_sign(self) -> None:
        self.constant = -self.constant
        self.cells = {s: -c for s, c in self.cells.items()}

    def solve_for(self, sym: int) -> None:
        """Rewrite as: sym = rhs, given sym's cell in this row."""
        coef = -1.0 / self.cells.pop(sym)
        self.constant *= coef
        self.cells = {s: c * coef for s, c in self.cells.items()}

    def solve_for_ex(self, lhs: int, rhs: int) -> None:
        self.insert_symbol(lhs, -1.0)
        self.solve_for(rhs)

    def coefficient_for(self, sym: int) -> float:
        return self.cells.get(sym, 0.0)

    def substitute(self, sym: int, row: "_Row") -> None:
        if sym in self.cells:
            coef = self.cells.pop(sym)
            self.insert_row(row, coef)


@dataclass
class _Tag:
    marker: int
    other: int | None = None


class SimplexSolver:
    """Add/remove linear constraints; read variable values after solving."""

    def __init__(self):
        self._ids = itertools.count(1)
        self._rows: dict[int, _Row] = {}
        self._vars: dict[Variable, int] = {}
        self._tags: dict[Constraint, _Tag] = {}
        self._objective = _Row()
        self._artificial: _Row | None = None

    # -- public API --------------------------------------------------------

    def add_constraint(self, constraint: Constraint) -> None:
        if constraint in self._tags:
            raise ValueError(f"constraint already added: {constraint}")
        row, tag = self._create_row(constraint)
        subject = self._choose_subject(row, tag)

        if subject is None and all(s & 3 == _DUMMY for s in row.cells):
            if abs(row.constant) > EPS:
                self._remove_constraint_effects(constraint, tag)
                raise Infeasible(f"required constraint unsatisfiable: {constraint.tag}")
            subject = tag.marker

        if subject is None:
            if not self._add_with_artificial_variable(row):
                # the row may have pivoted into the tableau before the
                # failure was detected; excise it so the solver state is
                # exactly what it was before this call
                self._excise_failed_add(constraint, tag)
                raise Infeasible(f"required constraint unsatisfiable: {constraint.tag}")
        else:
            row.solve_for(subject)
            self._substitute(subject, row)
            self._rows[subject] = row

        self._tags[constraint] = tag
        self._optimize(self._objective)

    def _excise_failed_add(self, constraint: Constraint, tag: _Tag) -> None:
        self._remove_constraint_effects(constraint, tag)
        if tag.marker in self._rows:
            del self._rows[tag.marker]
        else:
            try:
                leaving, row = self._marker_leaving_row(tag.marker)
            except ValueError:
                row = None  # row never integrated; nothing to undo
            if row is not None:
                del self._rows[leaving]
                row.solve_for_ex(leaving, tag.marker)
                self._substitute(tag.marker, row)
        self._optimize(self._objective)

    def remove_constraint(self, constraint: Constraint) -> None:
        tag = self._tags.pop(constraint, None)
        if tag is None:
            raise ValueError(f"constraint not in solver: {constraint}")
        self._remove_constraint_effects(constraint, tag)

        row = self._rows.pop(tag.marker, None)
        if row is None:
            leaving, row = self._marker_leaving_row(tag.marker)
            del self._rows[leaving]
            row.solve_for_ex(leaving, tag.marker)
            self._substitute(tag.marker, row)
        self._optimize(self._objective)

    def has_constraint(self, constraint: Constraint) -> bool:
        return constraint in self._tags

    def value(self, var: Variable) -> float:
        sym = self._vars.get(var)
        if sym is None:
            return 0.0
        row = self._rows.get(sym)
        return row.constant if row is not None else 0.0

    def values(self, variables) -> dict[Variable, float]:
        return {v: self.value(v) for v in variables}

    # -- internals -----------------------------------------------------------

    def _symbol_for(self, var: Variable) -> int:
        sym = self._vars.get(var)
        if sym is None:
            sym = next(self._ids) * 4 | _EXTERNAL
            self._vars[var] = sym
        return sym

    def _create_row(self, c: Constraint) -> tuple[_Row, _Tag]:
        row = _Row(c.expr.constant)
        for var, coef in c.expr.terms.items():
            sym = self._symbol_for(var)
            basic = self._rows.get(sym)
            if basic is not None:
                row.insert_row(basic, coef)
            else:
                row.insert_symbol(sym, coef)

        required = c.strength == REQUIRED
        if c.op in ("<=", ">="):
            coef = 1.0 if c.op == "<=" else -1.0
            slack = next(self._ids) * 4 | _SLACK
            row.insert_symbol(slack, coef)
            tag = _Tag(marker=slack)
            if not required:
                error = next(self._ids) * 4 | _ERROR
                row.insert_symbol(error, -coef)
                self._objective.insert_symbol(error, c.strength * c.weight)
                tag.other = error
        else:
            if required:
                dummy = next(self._ids) * 4 | _DUMMY
                row.insert_symbol(dummy, 1.0)
                tag = _Tag(marker=dummy)
            else:
                eplus = next(self._ids) * 4 | _ERROR
                eminus = next(self._ids) * 4 | _ERROR
                row.insert_symbol(eplus, -1.0)
                row.insert_symbol(eminus, 1.0)
                self._objective.insert_symbol(eplus, c.strength * c.weight)
                self._objective.insert_symbol(eminus, c.strength * c.weight)
                tag = _Tag(marker=eplus, other=eminus)

        if row.constant < 0.0:
            row.reverse_sign()
        return row, tag

    def _choose_subject(self, row: _Row, tag: _Tag) -> int | None:
        for sym in sorted(row.cells):
            if sym & 3 == _EXTERNAL:
                return sym
        if _pivotable(tag.marker) and row.coefficient_for(tag.marker) < 0.0:
            return tag.marker
        if tag.other is not None and _pivotable(tag.other) and row.coefficient_for(tag.other) < 0.0:
            return tag.other
        return None

    def _add_with_artificial_variable(self, row: _Row) -> bool:
        art = next(self._ids) * 4 | _SLACK
        self._rows[art] = row.copy()
        self._artificial = row.copy()
        self._optimize(self._artificial)
        success = abs(self._artificial.constant) < EPS
        self._artificial = None

        art_row = self._rows.pop(art, None)
        if art_row is not None:
            if not art_row.cells:
                return success
            entering = next(
                (s for s in sorted(art_row.cells) if _pivotable(s)), None
            )
            if entering is None:
                return False
            art_row.solve_for_ex(art, entering)
            self._substitute(entering, art_row)
            self._rows[entering] = art_row
        for r in self._rows.values():
            r.remove(art)
        self._objective.remove(art)
        return success

    def _substitute(self, sym: int, row: _Row) -> None:
        for r in self._rows.values():
            if sym in r.cells:
                r.substitute(sym, row)
        self._objective.substitute(sym, row)
        if self._artificial is not None:
            self._artificial.substitute(sym, row)

    def _optimize(self, objective: _Row) -> None:
        while True:
            entering = next(
                (
                    s
                    for s in sorted(objective.cells)
                    if s & 3 != _DUMMY and objective.cells[s] < -EPS
                ),
                None,
            )
            if entering is None:
                return
            leaving, best = None, None
            for sym in sorted(self._rows):
                if sym & 3 == _EXTERNAL:
                    continue
                coef = self._rows[sym].coefficient_for(entering)
                if coef < -EPS:
                    ratio = -self._rows[sym].constant / coef
                    if best is None or ratio < best - EPS:
                        best, leaving = ratio, sym
            if leaving is None:
                raise Infeasible("objective is unbounded")
            row = self._rows.pop(leaving)
            row.solve_for_ex(leaving, entering)
            self._substitute(entering, row)
            self._rows[entering] = row

    def _marker_leaving_row(self, marker: int) -> tuple[int, _Row]:
        first = second = third = None
        r1 = r2 = float("inf")
        for sym in sorted(self._rows):
            row = self._rows[sym]
            coef = row.coefficient_for(marker)
            if coef == 0.0:
                continue
            if sym & 3 == _EXTERNAL:
                third = sym
            elif coef < 0.0:
                ratio = -row.constant / coef
                if ratio < r1:
                    r1, first = ratio, sym
            else:
                ratio = row.constant / coef
                if ratio < r2:
                    r2, second = ratio, sym
        chosen = first if first is not None else (second if second is not None else third)
        if chosen is None:
            raise ValueError("marker symbol not found in any row")
        return chosen, self._rows[chosen]

    def _remove_constraint_effects(self, c: Constraint, tag: _Tag) -> None:
        for sym in (tag.marker, tag.other):
            if sym is not None and sym & 3 == _ERROR:
                coef = -c.strength * c.weight
                basic = self._rows.get(sym)
                if basic is not None:
                    self._objective.insert_row(basic, coef)
                else:
                    self._objective.insert_symbol(sym, coef)
