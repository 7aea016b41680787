#!/usr/bin/env python3
"""Generate the bundled annotated corpus (CoNLL file: token TAB label).

A fixed set of hand-labeled sentences is combined with template
expansions (modifier x number-form x subject x predicate) drawn
deterministically, so regenerating the file is reproducible.

Usage: python3 tools/gen_corpus.py [out_path]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))

from statviz.corpus import AnnotatedCorpus, AnnotatedSentence, detokenize, save_corpus  # noqa: E402


def lab(tokens_labels):
    toks, labs = zip(*tokens_labels)
    return AnnotatedSentence(tuple(toks), tuple(labs))


def span(text: str, prefix: str) -> list[tuple[str, str]]:
    words = text.split()
    return [(w, f"{'B' if i == 0 else 'I'}-{prefix}") for i, w in enumerate(words)]


def outside(text: str) -> list[tuple[str, str]]:
    return [(w, "O") for w in text.split()]


# ---------------------------------------------------------------------------
# Hand-labeled sentences (kept verbatim; several are pipeline regression
# targets elsewhere in the test suite).
# ---------------------------------------------------------------------------

HAND = [
    lab(span("More than", "M") + span("40 %", "N") + outside("of") + span("students", "W")
        + span("like football", "P") + outside(".")),
    lab(span("Less than", "M") + span("1 %", "N") + outside("of") + span("US men", "W")
        + span("know how to tie a bow tie", "P") + outside(".")),
    lab(span("40 percent", "N") + outside("of") + span("USA fresh water", "W")
        + span("is used for agriculture", "P") + outside(".")),
    lab(span("65 %", "N") + outside("of") + span("coffee", "W")
        + span("are consumed in breakfast", "P") + outside(".")),
    lab(outside("In the US ,") + span("less than", "M") + span("1 %", "N")
        + span("men", "W") + span("know how to tie a bow tie", "P") + outside(".")),
    lab(span("More than", "M") + span("20 %", "N") + outside("of") + span("smartphone users", "W")
        + span("are social network users", "P") + outside(".")),
    lab(span("60 %", "N") + outside("of") + span("participants", "W")
        + span("come from the US", "P") + outside(",")
        + outside("while") + span("40 %", "N") + span("come from Canada", "P") + outside(".")),
    lab(span("49 %", "N") + outside("of") + span("students", "W") + span("like football", "P")
        + outside(", while") + span("33 %", "N") + outside("of") + span("students", "W")
        + span("like basketball", "P") + outside(".")),
    lab(span("76 %", "N") + span("students", "W") + span("find math difficult", "P") + outside(".")),
    lab(span("70 %", "N") + span("students", "W") + span("find math difficult", "P") + outside(".")),
    lab(span("More than", "M") + span("1 / 3", "N") + outside("of the") + span("U.S. adult population", "W")
        + span("is obese", "P") + outside(".")),
    lab(span("30 %", "N") + span("secretaries", "W") + span("wear glasses", "P") + outside(".")),
    lab(span("4 out of 5", "N") + span("dentists", "W") + span("agree", "P") + outside(".")),
    lab(span("40 %", "N") + outside("of") + span("US kids", "W") + span("like video games", "P")
        + outside(".")),
    lab(span("Half", "N") + outside("of") + span("American adults", "W") + span("own a smartphone", "P")
        + outside(".")),
    lab(span("30 %", "N") + outside("of") + span("students", "W") + span("are French", "P")
        + outside(";") + outside("while") + span("40 %", "N") + span("are American", "P") + outside(".")),
    lab(span("30 %", "N") + outside("of") + span("students", "W") + span("speak French", "P")
        + outside(", while") + span("40 %", "N") + span("speak English", "P") + outside(".")),
]

# ---------------------------------------------------------------------------
# Template fillers
# ---------------------------------------------------------------------------

MODIFIERS = [
    "More than", "Less than", "About", "Nearly", "Almost", "Over", "Around",
    "At least", "Up to", "Roughly", "Approximately", "Fewer than",
]

WHOLES = [
    "students", "adults", "teenagers", "kids", "children", "Americans", "US men",
    "US women", "women", "men", "employees", "workers", "teachers", "doctors",
    "nurses", "engineers", "drivers", "commuters", "millennials", "parents",
    "households", "families", "consumers", "customers", "shoppers", "voters",
    "citizens", "residents", "patients", "smokers", "athletes", "runners",
    "cyclists", "gamers", "smartphone users", "internet users", "participants",
    "respondents", "visitors", "tourists", "travelers", "readers", "viewers",
    "college students", "high school students", "graduates", "scientists",
    "researchers", "secretaries", "managers", "developers", "designers",
    "farmers", "pet owners", "dog owners", "cat owners", "homeowners",
    "renters", "retirees", "seniors", "coffee drinkers", "tea drinkers",
    "vegetarians", "office workers", "freelancers", "entrepreneurs",
    "companies", "restaurants", "hotels", "couples", "singles", "dentists",
    "Canadians", "Europeans", "nurses", "lawyers", "pilots", "chefs",
]

PARTS = [
    "like football", "like basketball", "like soccer", "play video games",
    "play chess", "watch TV daily", "watch the news", "read books regularly",
    "read the news online", "drink coffee every morning", "drink tea",
    "eat breakfast daily", "skip breakfast", "exercise regularly",
    "go to the gym", "ride a bike to work", "walk to work", "drive to work",
    "work from home", "work remotely", "own a smartphone", "own a pet",
    "own a car", "own a house", "use social media", "use public transport",
    "use online banking", "shop online", "buy groceries online",
    "prefer online shopping", "prefer tea over coffee", "prefer remote work",
    "speak two languages", "speak English", "know how to swim",
    "know how to cook", "suffer from stress", "suffer from allergies",
    "experience burnout", "feel tired at work", "sleep less than seven hours",
    "wear glasses", "wear sneakers daily", "recycle regularly",
    "donate to charity", "volunteer monthly", "vote in local elections",
    "travel abroad every year", "visit museums", "attend college",
    "graduate on time", "live in cities", "live alone", "rent their homes",
    "save for retirement", "invest in stocks", "believe in climate change",
    "support renewable energy", "want flexible hours", "need more sleep",
    "check email before breakfast", "stream music daily",
    "subscribe to streaming services", "struggle with math",
    "find math difficult", "pass the exam", "have a library card",
    "plan to buy a house", "enjoy cooking", "take the bus to school",
]

MASS_WHOLES = [
    "fresh water", "coffee", "energy", "electricity", "food", "plastic",
    "waste", "paper", "farmland", "the budget", "household income",
    "the harvest", "city land",
]

MASS_PARTS = [
    "is used for agriculture", "is used for irrigation", "is wasted every year",
    "is recycled", "is produced locally", "comes from renewable sources",
    "goes to landfills", "is spent on housing", "is consumed at breakfast",
    "is imported", "is saved each month",
]

PLACES = ["the US", "the UK", "Canada", "Europe", "Japan", "Germany", "France", "Australia"]

SECOND_PARTS = [
    "prefer basketball", "choose tea", "pick the train", "stay home",
    "come from Canada", "come from Europe", "prefer cash", "use a laptop",
    "read print books", "prefer the office",
]


def pct(rng) -> list[tuple[str, str]]:
    n = int(rng.integers(1, 100))
    style = rng.integers(0, 10)
    if style < 7:
        return span(f"{n} %", "N")
    if style < 8:
        return span(f"{n} percent", "N")
    # one-decimal percents
    return span(f"{n}.5 %", "N")


def m_in_n(rng) -> list[tuple[str, str]]:
    den = int(rng.choice([3, 4, 5, 8, 10]))
    num = int(rng.integers(1, den))
    style = rng.integers(0, 3)
    if style == 0:
        return span(f"{num} in {den}", "N")
    if style == 1:
        return span(f"{num} out of {den}", "N")
    return span(f"{num} / {den}", "N")


def fraction_words(rng) -> list[tuple[str, str]]:
    return span(str(rng.choice(["Half", "A third", "Two thirds", "A quarter", "Three quarters"])), "N")


def number(rng) -> list[tuple[str, str]]:
    r = rng.integers(0, 10)
    if r < 6:
        return pct(rng)
    if r < 9:
        return m_in_n(rng)
    return fraction_words(rng)


def make_templates(rng):
    """Yield labeled sentences until exhausted; deterministic order."""
    wholes = list(WHOLES)
    parts = list(PARTS)
    rng.shuffle(wholes)
    rng.shuffle(parts)
    count = 0
    while count < 400:
        w = wholes[count % len(wholes)]
        p = parts[(count * 7 + count // len(wholes)) % len(parts)]
        t = count % 9
        num = number(rng)
        if t == 0:
            yield lab(span(str(rng.choice(MODIFIERS)), "M") + num + outside("of")
                      + span(w, "W") + span(p, "P") + outside("."))
        elif t == 1:
            yield lab(num + outside("of") + span(w, "W") + span(p, "P") + outside("."))
        elif t == 2:
            yield lab(pct(rng) + span(w, "W") + span(p, "P") + outside("."))
        elif t == 3:
            place = str(rng.choice(PLACES))
            yield lab(outside(f"In {place} ,") + span(str(rng.choice(MODIFIERS)).lower(), "M")
                      + num + outside("of") + span(w, "W") + span(p, "P") + outside("."))
        elif t == 4:
            mass_w = str(rng.choice(MASS_WHOLES))
            mass_p = str(rng.choice(MASS_PARTS))
            yield lab(num + outside("of") + span(mass_w, "W") + span(mass_p, "P") + outside("."))
        elif t == 5:
            yield lab(span(str(rng.choice(MODIFIERS)), "M") + num + outside("of the")
                      + span(w, "W") + span(p, "P") + outside("."))
        elif t == 6:
            n2 = int(rng.integers(1, 50))
            p2 = str(rng.choice(SECOND_PARTS))
            yield lab(pct(rng) + outside("of") + span(w, "W") + span(p, "P")
                      + outside(", while") + span(f"{n2} %", "N") + span(p2, "P") + outside("."))
        elif t == 7:
            yield lab(outside("Worldwide ,") + num + outside("of") + span(w, "W")
                      + span(p, "P") + outside("."))
        else:
            yield lab(num + outside("of") + span(w, "W") + span(p, "P") + outside("."))
        count += 1


def main(out_path: str) -> None:
    rng = np.random.default_rng(20260808)
    sentences = list(HAND)
    seen = {s.tokens for s in sentences}
    for sent in make_templates(rng):
        if len(sentences) >= 340:
            break
        if sent.tokens in seen:
            continue
        seen.add(sent.tokens)
        sentences.append(sent)

    corpus = AnnotatedCorpus(sentences)
    save_corpus(corpus, out_path)
    n_multi = sum(1 for s in sentences if sum(l == "B-N" for l in s.labels) > 1)
    print(f"wrote {len(sentences)} sentences ({n_multi} multi-fact) to {out_path}")
    print("sample:", detokenize(sentences[20].tokens))


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(SRC / "statviz" / "data" / "corpus.conll")
    main(out)
