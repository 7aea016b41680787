import pytest
from hypothesis import given, settings, strategies as st

from statviz.errors import TooManyLines
from statviz.textmetrics import break_lines, breaking_options, bundled_fonts

from .oracles import brute_force_line_breaks


@pytest.fixture(scope="module")
def fonts():
    return bundled_fonts()


@pytest.fixture(scope="module")
def sans(fonts):
    return fonts["Metric Sans"]


def test_three_families_bundled(fonts):
    assert len(fonts) == 3
    compactness = {f.family: f.text_width("Hamburgefonstiv") for f in fonts.values()}
    assert len(set(compactness.values())) == 3  # genuinely different widths


def test_text_width_additive(sans):
    assert sans.text_width("ab") == pytest.approx(
        sans.char_width("a") + sans.char_width("b")
    )
    assert sans.text_width("a", size=12) == pytest.approx(12 * sans.text_width("a"))


def test_single_line_has_zero_raggedness(sans):
    r = break_lines("students like football", sans, 1)
    assert r.line_count == 1
    assert r.cost == 0.0
    assert r.texts() == ["students like football"]


def test_one_word_per_line_boundary(sans):
    text = "one two three four"
    r = break_lines(text, sans, 4)
    assert r.texts() == ["one", "two", "three", "four"]
    assert r.max_width == pytest.approx(sans.text_width("three"))


def test_too_many_lines(sans):
    with pytest.raises(TooManyLines):
        break_lines("just three words", sans, 4)
    with pytest.raises(TooManyLines):
        break_lines("word", sans, 0)


def test_breaks_only_at_spaces(sans):
    text = "of USA fresh water is used for agriculture"
    for l in range(1, 9):
        r = break_lines(text, sans, l)
        assert " ".join(r.texts()).split() == text.split()
        assert r.line_count == l


SENTENCES = [
    "More than 40% of students like football",
    "of USA fresh water is used for agriculture",
    "men know how to tie a bow tie",
    "are consumed in breakfast",
    "In the US less than 1% men know how",
    "one two three four five six seven eight nine ten eleven twelve",
    "a bb ccc dddd eeeee ffffff ggggggg",
]


@pytest.mark.parametrize("text", SENTENCES)
def test_dp_matches_brute_force(text, sans):
    words = text.split()
    widths = [sans.text_width(w) for w in words]
    space = sans.char_width(" ")
    for l in range(1, min(10, len(words)) + 1):
        got = break_lines(text, sans, l)
        want_cost, _ = brute_force_line_breaks(widths, space, l)
        assert got.cost == pytest.approx(want_cost, rel=1e-9, abs=1e-12), (text, l)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.text(alphabet="abcdefgWM", min_size=1, max_size=9), min_size=2, max_size=9),
    st.integers(1, 9),
)
def test_dp_matches_brute_force_property(words, line_count, ):
    sans = bundled_fonts()["Metric Sans"]
    if line_count > len(words):
        return
    text = " ".join(words)
    got = break_lines(text, sans, line_count)
    want_cost, _ = brute_force_line_breaks(
        [sans.text_width(w) for w in words], sans.char_width(" "), line_count
    )
    assert got.cost == pytest.approx(want_cost, rel=1e-9, abs=1e-12)
    # block geometry is consistent
    assert got.max_width == pytest.approx(max(got.widths))
    assert got.aspect == pytest.approx(got.max_width / (line_count * sans.line_height))


def test_breaking_options_ladder(sans):
    options = breaking_options("men know how to tie a bow tie", sans, max_lines=10)
    assert [o.line_count for o in options] == list(range(1, 9))
    # more lines never widens the block
    widths = [o.max_width for o in options]
    assert all(b <= a + 1e-9 for a, b in zip(widths, widths[1:]))
