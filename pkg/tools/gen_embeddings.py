#!/usr/bin/env python3
"""Generate the bundled 50-d word embedding table.

Vectors are deterministic: each word's vector is its topic-cluster
centroid plus stem-keyed noise, normalized to unit length. Words sharing
a stem get identical vectors; words in one cluster land near each other
(cosine ~0.9); unrelated words are near-orthogonal. Every corpus word
and every asset keyword is covered.

Usage: python3 tools/gen_embeddings.py [out_path]
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import numpy as np

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))

from statviz.corpus import load_corpus  # noqa: E402
from statviz.resources import data_path  # noqa: E402

DIM = 50
NOISE = 0.23  # intra-cluster cosine ~ 1/(1+NOISE^2) ~ 0.95

CLUSTERS: dict[str, list[str]] = {
    "education": """student students school schools college university teacher
        teachers education classroom math exam exams study graduate graduates
        graduation degree learn learning book books read reads reading library
        card pass print""".split(),
    "sports": """football basketball soccer tennis golf sport sports game games
        player players team teams gym exercise fitness running runner runners
        cyclist cyclists bike bicycle athlete athletes swim swimming ball play
        plays chess agree trophy medal""".split(),
    "food": """food eat eating breakfast lunch dinner meal meals restaurant
        restaurants pizza burger fruit fruits vegetable vegetables apple
        groceries cook cooking chef chefs diet snack harvest vegetarians
        dentists""".split(),
    "drink": """coffee tea wine beer drink drinks drinkers drinking juice milk
        cup cups mug espresso latte caffeine bottle""".split(),
    "technology": """smartphone smartphones phone phones laptop laptops computer
        computers internet online website websites email emails app apps
        software technology digital device devices screen stream streaming
        subscribe gamers video developers engineers banking""".split(),
    "social": """social network networks media user users post posts share
        sharing follower followers friends message messages chat""".split(),
    "finance": """finance money dollar dollars income salary budget bank invest
        investing investment stocks savings save saving retirement pay payment
        spend spending cost costs price prices charity donate donation cash
        coin economy""".split(),
    "health": """health healthy doctor doctors nurse nurses hospital hospitals
        patient patients sleep stress allergy allergies disease illness
        medicine medical burnout tired obese smoking smoker smokers heart
        hours seven eight""".split(),
    "work": """work works working job jobs employee employees worker workers
        office manager managers meeting meetings project projects company
        companies business businesses freelancer freelancers entrepreneur
        entrepreneurs remote commute commuters secretary secretaries lawyers
        pilots flexible briefcase""".split(),
    "home": """home homes house houses apartment apartments rent renting
        renters homeowner homeowners family families household households
        parent parents kid kids child children baby babies marriage couple
        couples singles alone housing key""".split(),
    "travel": """travel travels traveling trip trips flight flights train
        trains bus buses car cars drive driving driver drivers tourist
        tourists visit visiting museum museums abroad vacation hotel hotels
        airport transport taxi public map walk ride plane""".split(),
    "environment": """environment environmental green nature planet earth
        climate recycling recycle recycled renewable energy solar wind forest
        forests tree trees leaf ocean oceans water plastic waste pollution
        sustainable electricity landfills drop rain cloud sun farmland
        irrigation agriculture fresh change""".split(),
    "people": """people person adult adults man men woman women male female
        citizen citizens resident residents american americans canadian
        canadians european europeans voters senior seniors teenager teenagers
        millennial millennials population responders respondents participants
        consumers customers shoppers visitors viewers readers listeners
        farmers scientists researchers designers retirees""".split(),
    "animals": """pet pets dog dogs cat cats fish bird birds animal animals
        owner owners""".split(),
    "places": """us usa america canada europe france germany japan australia
        uk england city cities country countries state states world worldwide
        globe local cities""".split(),
    "clothing": """wear wearing wears clothes shirt shoes sneakers tie bow suit
        skirt dress fashion glasses hat""".split(),
    "time": """year years daily weekly monthly morning evening day days hour
        minute minutes clock time early late""".split(),
    "communication": """news TV television watch watches watching listen
        music song radio camera photo envelope letter mail vote votes voting
        elections speak speaks languages english french""".split(),
}


def _rng_for(key: str) -> np.random.Generator:
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def stem(word: str) -> str:
    w = word.lower()
    for suffix in ("ing", "ers", "ies", "es", "ed", "er", "s"):
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            return w[: -len(suffix)]
    return w


def unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def main(out_path: str) -> None:
    centroids = {name: unit(_rng_for(f"cluster::{name}").normal(size=DIM)) for name in CLUSTERS}
    word_cluster: dict[str, str] = {}
    for name, words in CLUSTERS.items():
        for w in words:
            word_cluster.setdefault(w.lower(), name)
        word_cluster.setdefault(name, name)  # the cluster name itself

    vocab = set(word_cluster)
    corpus = load_corpus(data_path("corpus.conll"))
    for sent in corpus.sentences:
        for tok in sent.tokens:
            if tok.isalpha() or "." in tok:
                vocab.add(tok.lower())
    # asset keywords land in the same table; add a few extras used by manifests
    extras = """person icon star flag bulb idea note umbrella battery gift
        rocket target chart document scale leafy night romance love safety
        growth speed power light dark""".split()
    vocab.update(w.lower() for w in extras)

    rows = []
    for word in sorted(vocab):
        noise = _rng_for(f"word::{stem(word)}").normal(size=DIM)
        cluster = word_cluster.get(word) or word_cluster.get(stem(word))
        if cluster:
            vec = unit(centroids[cluster] + NOISE * unit(noise))
        else:
            vec = unit(noise)
        rows.append((word, vec))

    with Path(out_path).open("w", encoding="utf-8") as fh:
        for word, vec in rows:
            fh.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")
    print(f"wrote {len(rows)} words x {DIM} dims to {out_path}")

    # quick sanity: a few similarities that the asset matcher relies on
    table = {w: v for w, v in rows}

    def sim(a, b):
        return float(np.dot(unit(table[a]), unit(table[b])))

    for a, b in [("students", "student"), ("coffee", "cup"), ("environment", "green"),
                 ("students", "coffee"), ("football", "student"), ("secretaries", "skirt")]:
        print(f"cos({a}, {b}) = {sim(a, b):.3f}")


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(SRC / "statviz" / "data" / "embeddings_50d.txt")
    main(out)
