import pytest
from hypothesis import given, strategies as st

from statviz.errors import EmptyInput
from statviz.tokenizer import Token, TokenKind, reconstruct, tokenize


def texts(tokens):
    return [t.text for t in tokens]


def test_nine_token_example():
    toks = tokenize("More than 40% of students like football.")
    assert texts(toks) == ["More", "than", "40", "%", "of", "students", "like", "football", "."]
    assert toks[2].kind is TokenKind.NUMBER
    assert toks[3].kind is TokenKind.PERCENT_SIGN
    assert toks[8].kind is TokenKind.PUNCTUATION
    # "more than" is a known multi-word phrase: flagged, not merged
    assert toks[0].kind is TokenKind.SPECIAL_PHRASE
    assert toks[1].kind is TokenKind.SPECIAL_PHRASE


def test_single_word():
    toks = tokenize("x")
    assert texts(toks) == ["x"]
    assert toks[0].kind is TokenKind.WORD


def test_abbreviation_stays_whole():
    toks = tokenize("1 in 4 U.S. adults")
    assert texts(toks) == ["1", "in", "4", "U.S.", "adults"]
    assert toks[3].kind is TokenKind.ABBREVIATION


def test_fraction_slash_is_separate():
    toks = tokenize("About 1/4 of adults")
    assert texts(toks) == ["About", "1", "/", "4", "of", "adults"]
    assert toks[2].kind is TokenKind.PUNCTUATION


def test_out_of_flagged():
    toks = tokenize("4 out of 5 dentists agree.")
    assert texts(toks) == ["4", "out", "of", "5", "dentists", "agree", "."]
    assert toks[1].kind is TokenKind.SPECIAL_PHRASE
    assert toks[2].kind is TokenKind.SPECIAL_PHRASE
    # a plain "of" elsewhere stays a word
    toks2 = tokenize("40% of students")
    assert toks2[2].text == "of" and toks2[2].kind is TokenKind.WORD


def test_decimal_and_comma_numbers():
    toks = tokenize("12.5% of 1,000 people")
    assert texts(toks) == ["12.5", "%", "of", "1,000", "people"]
    assert toks[0].kind is TokenKind.NUMBER
    assert toks[3].kind is TokenKind.NUMBER


def test_offsets_and_lower():
    statement = "More than 40% of students"
    toks = tokenize(statement)
    for t in toks:
        assert statement[t.char_start : t.char_end] == t.text
    assert toks[0].lower == "more"


def test_empty_input():
    with pytest.raises(EmptyInput):
        tokenize("   ")
    with pytest.raises(EmptyInput):
        tokenize("")


@given(st.text(min_size=1, max_size=80))
def test_reconstruction_property(s):
    try:
        toks = tokenize(s)
    except EmptyInput:
        assert not s.strip()
        return
    assert reconstruct(s, toks) == s
    # ordered, non-overlapping
    for a, b in zip(toks, toks[1:]):
        assert a.char_end <= b.char_start
    # gaps are whitespace only
    prev = 0
    for t in toks:
        assert s[prev : t.char_start].strip() == ""
        prev = t.char_end
    assert s[prev:].strip() == ""


@given(st.text(min_size=1, max_size=80))
def test_deterministic(s):
    try:
        first = tokenize(s)
    except EmptyInput:
        return
    assert first == tokenize(s)


def test_idempotent_on_reconstruction():
    s = "Less than 1% of U.S. men know how to tie a bow tie."
    toks = tokenize(s)
    assert tokenize(reconstruct(s, toks)) == toks
