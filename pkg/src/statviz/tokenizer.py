"""Statement tokenization.

Splits a statement into word, number, percent-sign, punctuation,
abbreviation, and special-phrase tokens while keeping exact character
offsets, so the original text can always be reconstructed from the
token spans plus the inter-token gaps.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

from .errors import EmptyInput
from .resources import read_lines


class TokenKind(Enum):
    WORD = "word"
    NUMBER = "number"
    PERCENT_SIGN = "percent_sign"
    PUNCTUATION = "punctuation"
    ABBREVIATION = "abbreviation"
    SPECIAL_PHRASE = "special_phrase"


@dataclass(frozen=True)
class Token:
    text: str
    char_start: int
    char_end: int  # exclusive
    kind: TokenKind

    @property
    def lower(self) -> str:
        return self.text.lower()

    @property
    def is_numeric(self) -> bool:
        return self.kind is TokenKind.NUMBER


# Abbreviations like "U.S." must win over the word/punct split; numbers may
# carry thousands separators and one decimal part.
_TOKEN_RE = re.compile(
    r"""
    (?P<abbrev>(?:[A-Za-z]\.){2,})
  | (?P<number>\d+(?:,\d{3})*(?:\.\d+)?)
  | (?P<word>[A-Za-z]+(?:'[A-Za-z]+)*)
  | (?P<other>\S)
    """,
    re.VERBOSE,
)


@lru_cache(maxsize=1)
def _special_phrases() -> tuple[tuple[str, ...], ...]:
    phrases = []
    for line in read_lines("lexicons", "special_phrases.txt"):
        words = tuple(line.lower().split())
        if len(words) >= 2:
            phrases.append(words)
    # longest first so "out of" beats a hypothetical shorter prefix
    return tuple(sorted(phrases, key=len, reverse=True))


def _flag_special_phrases(tokens: list[Token]) -> list[Token]:
    lowers = [t.lower for t in tokens]
    flagged = list(tokens)
    for phrase in _special_phrases():
        n = len(phrase)
        for i in range(len(tokens) - n + 1):
            if tuple(lowers[i : i + n]) == phrase and all(
                flagged[j].kind in (TokenKind.WORD, TokenKind.SPECIAL_PHRASE)
                for j in range(i, i + n)
            ):
                for j in range(i, i + n):
                    flagged[j] = replace(flagged[j], kind=TokenKind.SPECIAL_PHRASE)
    return flagged


def tokenize(statement: str) -> list[Token]:
    """Split a statement into ordered, non-overlapping tokens.

    Percent signs, fraction slashes, and punctuation become separate
    tokens; dotted abbreviations stay whole; the words of known
    multi-word phrases ("out of", "more than", ...) stay separate tokens
    but are flagged SPECIAL_PHRASE.

    Raises EmptyInput when the statement is empty or whitespace-only.
    """
    if not statement or not statement.strip():
        raise EmptyInput("statement is empty or whitespace-only")

    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(statement):
        text = m.group(0)
        if m.lastgroup == "abbrev":
            kind = TokenKind.ABBREVIATION
        elif m.lastgroup == "number":
            kind = TokenKind.NUMBER
        elif m.lastgroup == "word":
            kind = TokenKind.WORD
        elif text == "%":
            kind = TokenKind.PERCENT_SIGN
        else:
            kind = TokenKind.PUNCTUATION
        tokens.append(Token(text, m.start(), m.end(), kind))

    return _flag_special_phrases(tokens)


def reconstruct(statement: str, tokens: list[Token]) -> str:
    """Rebuild the statement from token spans plus inter-token gaps."""
    parts = []
    prev_end = 0
    for tok in tokens:
        parts.append(statement[prev_end : tok.char_start])
        parts.append(tok.text)
        prev_end = tok.char_end
    parts.append(statement[prev_end:])
    return "".join(parts)
