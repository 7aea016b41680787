"""Proportion facts: number normalization, fact assembly, multi-fact
segmentation, and description candidates.

Entity spans come from the tagger; everything here is pure string and
arithmetic work over those spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .analyzer import TaggedStatement
from .errors import NoNumberEntity, OutOfRange, UnparsableNumber
from .resources import read_lines
from .tokenizer import Token, TokenKind, tokenize

EPS = 1e-9
SUM_EPS = 1e-6


class Polarity(Enum):
    MORE_THAN = "more_than"
    LESS_THAN = "less_than"
    ABOUT = "about"
    EXACT = "exact"


class Relation(Enum):
    SINGLE = "single"
    COMPARISON = "comparison"
    ACCUMULATION = "accumulation"


@dataclass(frozen=True)
class ProportionFact:
    statement: str
    value: float
    surface_number: str
    number_span: tuple[int, int]
    numerator: int | None = None
    denominator: int | None = None
    modifier: str | None = None
    modifier_polarity: Polarity = Polarity.EXACT
    modifier_span: tuple[int, int] | None = None
    part: str | None = None
    part_span: tuple[int, int] | None = None
    whole: str | None = None
    whole_span: tuple[int, int] | None = None
    whole_inherited: bool = False

    def __post_init__(self):
        if not (-EPS <= self.value <= 1 + EPS):
            raise OutOfRange(f"value {self.value} outside [0, 1]")
        if self.numerator is not None:
            if self.denominator is None or not (0 < self.numerator <= self.denominator):
                raise UnparsableNumber(
                    f"bad fraction {self.numerator}/{self.denominator}"
                )
            if abs(self.value - self.numerator / self.denominator) > EPS:
                raise UnparsableNumber("value does not match numerator/denominator")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "surface_number": self.surface_number,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "modifier": self.modifier,
            "modifier_polarity": self.modifier_polarity.value,
            "part": self.part,
            "whole": self.whole,
        }


@dataclass(frozen=True)
class FactGroup:
    facts: tuple[ProportionFact, ...]
    relation: Relation

    def __post_init__(self):
        if not self.facts:
            raise ValueError("FactGroup needs at least one fact")
        if (self.relation is Relation.SINGLE) != (len(self.facts) == 1):
            raise ValueError("relation=single iff exactly one fact")
        if self.relation is Relation.ACCUMULATION:
            total = sum(f.value for f in self.facts)
            if total > 1 + SUM_EPS:
                raise ValueError(f"accumulation values sum to {total} > 1")

    @property
    def statement(self) -> str:
        return self.facts[0].statement


@dataclass(frozen=True)
class DescriptionSet:
    entire: str
    number_removed: str
    number: str
    before_number: str
    after_number: str
    part_phrase: str | None = None
    number_whole_phrase: str | None = None
    modifier: str | None = None

    def forms(self) -> dict[str, str]:
        """Non-empty description forms by name (the blueprint slot vocabulary)."""
        out = {"entire": self.entire, "number_removed": self.number_removed}
        if self.before_number:
            out["before_number"] = self.before_number
        if self.after_number:
            out["after_number"] = self.after_number
        if self.part_phrase:
            out["part_phrase"] = self.part_phrase
        if self.number_whole_phrase:
            out["number_whole_phrase"] = self.number_whole_phrase
        if self.modifier:
            out["modifier"] = self.modifier
        return out


# ---------------------------------------------------------------------------
# number normalization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _fraction_words() -> dict[str, tuple[int, int]]:
    table = {}
    for line in read_lines("lexicons", "fraction_words.txt"):
        word, num, den = line.split("\t")
        table[word] = (int(num), int(den))
    return table


@lru_cache(maxsize=1)
def _number_words() -> dict[str, int]:
    table = {}
    for line in read_lines("lexicons", "number_words.txt"):
        word, value = line.split("\t")
        table[word] = int(value)
    return table


@lru_cache(maxsize=1)
def _modifier_table() -> dict[str, Polarity]:
    table = {}
    for line in read_lines("lexicons", "modifiers.txt"):
        phrase, polarity = line.split("\t")
        table[phrase] = Polarity(polarity)
    return table


def _parse_numeral(text: str) -> float:
    return float(text.replace(",", ""))


def normalize_number(span: list[Token] | str) -> tuple[float, int | None, int | None]:
    """(value, numerator, denominator) for a tagged number span.

    Handles "n%", "n percent", "m in n", "m out of n", "m/n", "half of",
    and fraction words ("two thirds"); decimals allowed. Raises
    UnparsableNumber when nothing numeric is found, OutOfRange when the
    value exceeds 1.
    """
    tokens = tokenize(span) if isinstance(span, str) else span
    words = [t.lower for t in tokens]
    numerals = []
    for i, t in enumerate(tokens):
        if t.kind is TokenKind.NUMBER:
            numerals.append((i, _parse_numeral(t.text)))
        elif t.lower in _number_words() and t.lower not in ("a", "an"):
            numerals.append((i, float(_number_words()[t.lower])))
    has_percent = any(
        t.kind is TokenKind.PERCENT_SIGN or t.lower == "percent" for t in tokens
    ) or any(a == "per" and b == "cent" for a, b in zip(words, words[1:]))

    def check(value: float, num: int | None = None, den: int | None = None):
        if value > 1 + EPS:
            raise OutOfRange(f"proportion value {value} > 1")
        if value < -EPS:
            raise UnparsableNumber(f"negative value {value}")
        return (float(value), num, den)

    if has_percent:
        if not numerals:
            raise UnparsableNumber(f"percent sign without a numeral in {words}")
        return check(numerals[0][1] / 100.0)

    if len(numerals) >= 2:
        # "m in n", "m out of n", "m/n": a separator between two numerals
        (i, m), (j, n) = numerals[0], numerals[1]
        between = {w for w in words[i + 1 : j]}
        if between <= {"in", "out", "of", "/"} and n > 0:
            as_int = m == int(m) and n == int(n)
            num, den = (int(m), int(n)) if as_int else (None, None)
            if num is not None and num > den:
                raise OutOfRange(f"fraction {num}/{den} > 1")
            return check(m / n, num, den)

    # fraction words, with an optional leading multiplier ("two thirds")
    for i, w in enumerate(words):
        frac = _fraction_words().get(w)
        if frac is None:
            continue
        mult = 1
        if i > 0:
            prev = words[i - 1]
            if prev in _number_words():
                mult = _number_words()[prev]
            elif tokens[i - 1].kind is TokenKind.NUMBER:
                mult = int(_parse_numeral(tokens[i - 1].text))
        num, den = frac[0] * mult, frac[1]
        if num > den:
            raise OutOfRange(f"fraction {num}/{den} > 1")
        return check(Fraction(num, den).__float__(), num, den)

    if len(numerals) == 1:
        value = numerals[0][1]
        if value <= 1 + EPS:  # bare decimal fraction like "0.4"
            return check(value)
        raise UnparsableNumber(f"bare number {value} has no percent/denominator")

    raise UnparsableNumber(f"no numeric value in {words}")


# ---------------------------------------------------------------------------
# fact assembly
# ---------------------------------------------------------------------------


def _token_spans(tagged: TaggedStatement, entity: str) -> list[tuple[int, int]]:
    """Token-index (start, end_exclusive) spans of one entity type."""
    spans = []
    start = None
    for i, labv in enumerate(tagged.sequence.labels):
        if labv == f"B-{entity}":
            if start is not None:
                spans.append((start, i))
            start = i
        elif labv != f"I-{entity}" and start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(tagged.sequence.labels)))
    return spans


def _char_span(tagged: TaggedStatement, tok_span: tuple[int, int]) -> tuple[int, int]:
    toks = tagged.tokens[tok_span[0] : tok_span[1]]
    return toks[0].char_start, toks[-1].char_end


def build_fact(tagged: TaggedStatement) -> ProportionFact:
    """Assemble a normalized fact from the first number/modifier/part/whole spans."""
    statement = tagged.statement
    number_spans = _token_spans(tagged, "N")
    if not number_spans:
        raise NoNumberEntity(f"no number entity in {statement!r}")
    n_span = number_spans[0]
    value, num, den = normalize_number(list(tagged.tokens[n_span[0] : n_span[1]]))
    n_chars = _char_span(tagged, n_span)

    kwargs: dict = {}
    m_spans = _token_spans(tagged, "M")
    if m_spans:
        chars = _char_span(tagged, m_spans[0])
        text = statement[chars[0] : chars[1]]
        kwargs.update(
            modifier=text,
            modifier_span=chars,
            modifier_polarity=_modifier_table().get(text.lower(), Polarity.ABOUT),
        )
    for entity, name in (("P", "part"), ("W", "whole")):
        spans = _token_spans(tagged, entity)
        if spans:
            chars = _char_span(tagged, spans[0])
            kwargs[name] = statement[chars[0] : chars[1]]
            kwargs[f"{name}_span"] = chars

    return ProportionFact(
        statement=statement,
        value=value,
        surface_number=statement[n_chars[0] : n_chars[1]],
        number_span=n_chars,
        numerator=num,
        denominator=den,
        **kwargs,
    )


# ---------------------------------------------------------------------------
# multi-fact segmentation
# ---------------------------------------------------------------------------

_CLAUSE_BOUNDARY = re.compile(r";\s*|,?\s+while\s+|,?\s+whereas\s+|,\s+and\s+", re.IGNORECASE)


def segment_facts(statement: str, tagger) -> FactGroup:
    """Split a statement at clause boundaries between number entities,
    re-tag each clause, and classify the resulting group.

    ``tagger`` is anything with ``tag(text) -> TaggedStatement``.
    """
    tagged = tagger.tag(statement)
    number_spans = _token_spans(tagged, "N")
    if not number_spans:
        raise NoNumberEntity(f"no number entity in {statement!r}")
    if len(number_spans) == 1:
        return FactGroup((build_fact(tagged),), Relation.SINGLE)

    char_spans = [_char_span(tagged, s) for s in number_spans]
    pieces: list[str] = []
    cursor = 0
    for m in _CLAUSE_BOUNDARY.finditer(statement):
        left = statement[cursor : m.start()]
        right = statement[m.end() :]
        # split only between number entities
        if any(s >= cursor and e <= m.start() for s, e in char_spans) and any(
            s >= m.end() for s, e in char_spans
        ):
            pieces.append(left)
            cursor = m.end()
    pieces.append(statement[cursor:])

    if len(pieces) == 1:
        return FactGroup((build_fact(tagged),), Relation.SINGLE)

    facts: list[ProportionFact] = []
    errors: list[Exception] = []
    for clause in pieces:
        clause = clause.strip()
        if not clause:
            continue
        try:
            facts.append(build_fact(tagger.tag(clause)))
        except Exception as exc:  # a group is valid if >= 1 clause parses
            errors.append(exc)
    if not facts:
        raise errors[0] if errors else NoNumberEntity(statement)
    if len(facts) == 1:
        return FactGroup((facts[0],), Relation.SINGLE)

    # elided wholes inherit from the previous clause
    resolved: list[ProportionFact] = []
    for fact in facts:
        if fact.whole is None and resolved and resolved[-1].whole is not None:
            from dataclasses import replace

            fact = replace(fact, whole=resolved[-1].whole, whole_span=None, whole_inherited=True)
        resolved.append(fact)

    wholes = {f.whole.lower() for f in resolved if f.whole} if all(f.whole for f in resolved) else None
    total = sum(f.value for f in resolved)
    if wholes is not None and len(wholes) == 1 and total <= 1 + SUM_EPS:
        relation = Relation.ACCUMULATION
    else:
        relation = Relation.COMPARISON
    return FactGroup(tuple(resolved), relation)


# ---------------------------------------------------------------------------
# description candidates
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _verb_lexicon() -> frozenset[str]:
    return frozenset(read_lines("lexicons", "verbs.txt"))


def _clean(text: str) -> str:
    text = re.sub(r"\s+", " ", text).strip()
    return text.rstrip(".!").rstrip()


_CONNECTIVES = frozenset({"of", "the", "all", "among"})


def extract_descriptions(statement: str, fact: ProportionFact) -> DescriptionSet:
    """All derivable description forms for one fact.

    Texts are taken verbatim from the statement (trailing sentence
    punctuation dropped, whitespace normalized).
    """
    ns, ne = fact.number_span
    entire = _clean(statement)
    number_removed = _clean(statement[:ns] + " " + statement[ne:])
    before = _clean(statement[:ns])
    after = _clean(statement[ne:])

    part_phrase = None
    if fact.part:
        first = fact.part.split()[0].lower()
        if first in _verb_lexicon():
            part_phrase = _clean(fact.part)

    number_whole_phrase = None
    if fact.whole_span is not None:
        ws, we = fact.whole_span
        if ws >= ne:
            gap_words = statement[ne:ws].replace(",", " ").split()
            if all(w.lower() in _CONNECTIVES for w in gap_words) and "," not in statement[ne:ws]:
                start = ns
                if fact.modifier_span is not None:
                    ms, me = fact.modifier_span
                    if me <= ns and statement[me:ns].strip() == "":
                        start = ms
                number_whole_phrase = _clean(statement[start:we])

    return DescriptionSet(
        entire=entire,
        number_removed=number_removed,
        number=fact.surface_number,
        before_number=before,
        after_number=after,
        part_phrase=part_phrase,
        number_whole_phrase=number_whole_phrase,
        modifier=fact.modifier,
    )
