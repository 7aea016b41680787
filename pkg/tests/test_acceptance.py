"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its measured numbers.
"""

import json
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest
import requests

from statviz import crf
from statviz.analyzer import evaluate, gold_tagged_statement, train
from statviz.assets import AssetLibrary
from statviz.charts import GraphicKind
from statviz.cli import main as cli_main
from statviz.corpus import ENTITY_NAMES
from statviz.crf import N_LABELS, TaggerModel, corpus_objective, decode, marginals
from statviz.errors import Infeasible
from statviz.facts import build_fact, extract_descriptions, normalize_number, segment_facts
from statviz.features import FeatureConfig
from statviz.layout import check_layout
from statviz.render import SVG_NS, render, validate
from statviz.resources import data_path
from statviz.service import ApiServer
from statviz.synth import RankingWeights, rank, score, synthesize
from statviz.textmetrics import break_lines, bundled_fonts

from .oracles import (
    brute_force_decode,
    brute_force_line_breaks,
    brute_force_marginals,
)
from .test_facts import GOLDEN_NUMBERS

SMALL = FeatureConfig(embedding_dim=3)


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {'PASS' if ok else 'FAIL'} - {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


# -- criterion: tagger correctness (property) ---------------------------------


def test_tagger_correctness_property():
    rng = np.random.default_rng(2026)
    started = time.perf_counter()
    max_marginal_err = 0.0
    for trial in range(200):
        t = 1 + trial % 6
        model = TaggerModel(SMALL, 3, 4, rng=rng)
        model.trans = rng.normal(0.0, 1.0, (N_LABELS, N_LABELS))
        x = rng.normal(0.0, 1.0, (t, SMALL.width))
        emissions = model.emissions(x)
        masked = model.trans + crf.TRANS_MASK

        got = decode(model, x)
        want_labels, _ = brute_force_decode(emissions, masked)
        assert got.labels == want_labels, f"trial {trial}: viterbi != brute force"

        err = float(np.abs(marginals(model, x) - brute_force_marginals(emissions, masked)).max())
        max_marginal_err = max(max_marginal_err, err)
        assert err <= 1e-6, f"trial {trial}: marginal error {err}"
    elapsed = time.perf_counter() - started
    report(
        "tagger correctness (200 brute-force trials, len <= 6)",
        elapsed < 30.0,
        f"max marginal err {max_marginal_err:.2e}, {elapsed:.1f}s < 30s",
    )


# -- criterion: gradient check -------------------------------------------------


def test_gradient_check_micro_corpus():
    rng = np.random.default_rng(17)
    model = TaggerModel(SMALL, 3, 4, rng=rng)
    model.trans = rng.normal(0.0, 0.5, (N_LABELS, N_LABELS))
    xs, ys = [], []
    for _ in range(3):
        t = int(rng.integers(3, 6))
        xs.append(rng.normal(0.0, 1.0, (t, SMALL.width)))
        labels = [int(rng.choice(np.flatnonzero(np.isfinite(crf.START_MASK))))]
        for _ in range(t - 1):
            labels.append(int(rng.choice(np.flatnonzero(np.isfinite(crf.TRANS_MASK[labels[-1]])))))
        ys.append(np.array(labels, dtype=np.intp))

    l2 = 1e-3
    _, grads = corpus_objective(model, xs, ys, l2)
    h = 1e-5
    worst = 0.0
    for name, param in model.param_groups().items():
        flat = param.reshape(-1)
        g = grads[name].reshape(-1)
        idx = rng.choice(flat.size, size=min(60, flat.size), replace=False)
        for i in idx:
            orig = flat[i]
            flat[i] = orig + h
            up, _ = corpus_objective(model, xs, ys, l2)
            flat[i] = orig - h
            down, _ = corpus_objective(model, xs, ys, l2)
            flat[i] = orig
            fd = (up - down) / (2 * h)
            rel = abs(fd - g[i]) / max(abs(fd), abs(g[i]), 1e-8)
            worst = max(worst, rel)
            assert rel <= 1e-4, f"{name}[{i}]: rel err {rel:.2e}"
    report("gradient check (conv, emission, transition)", worst <= 1e-4,
           f"worst rel err {worst:.2e} <= 1e-4")


# -- criterion: tagger quality on the bundled corpus ---------------------------

TABLE2_REFERENCE = {"M": 0.97, "W": 0.77, "P": 0.69, "N": 0.97}
GATES = {"N": 0.90, "M": 0.85, "P": 0.60, "W": 0.60}


def test_tagger_quality_bundled_corpus(corpus, embeddings):
    config = FeatureConfig(embedding_dim=embeddings.dim)
    train_part, held = corpus.split(heldout_fraction=0.2, seed=13)
    started = time.perf_counter()
    model, _ = train(train_part, config, embeddings, heldout=held,
                     kernel_count=32, max_epochs=150, seed=0, step=0.5)
    elapsed = time.perf_counter() - started
    scores = evaluate(model, held, embeddings)
    lines = []
    for ent, s in scores.items():
        lines.append(f"{ENTITY_NAMES[ent]} F1 {s.f1:.3f} (gate {GATES[ent]:.2f}, "
                     f"reference {TABLE2_REFERENCE[ent]:.2f})")
    ok = all(scores[e].f1 >= GATES[e] for e in GATES) and elapsed < 300
    report("tagger quality (80/20 split of bundled corpus)", ok,
           "; ".join(lines) + f"; trained in {elapsed:.0f}s < 300s")


# -- criterion: number normalization golden table ------------------------------


def test_number_normalization_golden_table():
    assert len(GOLDEN_NUMBERS) >= 30
    for text, value, num, den in GOLDEN_NUMBERS:
        got_value, got_num, got_den = normalize_number(text)
        assert (got_value, got_num, got_den) == (value, num, den), text
    report("number normalization golden table", True,
           f"{len(GOLDEN_NUMBERS)} rows exact, zero tolerance")


# -- criterion: line breaking optimality ---------------------------------------


def test_line_breaking_matches_exhaustive_search(corpus, tagger):
    font = bundled_fonts()["Metric Sans"]
    texts = set()
    for sent in corpus.sentences[:150]:
        tagged = gold_tagged_statement(sent)
        try:
            fact = build_fact(tagged)
        except Exception:
            continue
        desc = extract_descriptions(tagged.statement, fact)
        texts.update(v for v in desc.forms().values() if v and len(v.split()) <= 12)

    checked = 0
    for text in sorted(texts):
        words = text.split()
        widths = [font.text_width(w) for w in words]
        space = font.char_width(" ")
        for line_count in range(1, min(10, len(words)) + 1):
            got = break_lines(text, font, line_count)
            want_cost, _ = brute_force_line_breaks(widths, space, line_count)
            assert got.cost == pytest.approx(want_cost, rel=1e-9, abs=1e-12), (text, line_count)
            checked += 1
    report("line breaking vs exhaustive search", checked > 500,
           f"{len(texts)} corpus descriptions, {checked} (text, line-count) pairs exact")


# -- criterion: layout constraints hold on generated candidates ----------------

STATEMENTS = [
    "More than 40% of students like football.",
    "2 in 5 adults drink coffee every morning.",
    "In the US, less than 1% men know how to tie a bow tie.",
    "60% of participants come from the US, while 40% come from Canada.",
    "80% of adults own a smartphone, while 60% of adults own a laptop.",
]


@pytest.fixture(scope="module")
def generated(pipeline):
    out = []
    for statement in STATEMENTS:
        group = pipeline.parse(statement)
        out.append((group, synthesize(group, pipeline.assets)))
    return out


def test_layout_constraints_on_generated_candidates(generated, pipeline):
    total = 0
    violations = []
    blueprints = set()
    for group, candidates in generated:
        for c in candidates:
            total += 1
            blueprints.add(c.blueprint.id)
            problems = check_layout(c.blueprint, c.layout, facts=c.group.facts)
            if problems:
                violations.append((c.id, c.blueprint.id, problems))
    ok = total >= 100 and not violations and len(blueprints) >= 16
    report("layout constraints (post-hoc checker)", ok,
           f"{total} candidates, {len(blueprints)} blueprints, {len(violations)} violations")


def test_font_ratio_band_specifically(generated):
    checked = 0
    for _, candidates in generated:
        for c in candidates:
            for fc in c.blueprint.constraints:
                if fc.kind != "font_ratio":
                    continue
                big = c.layout.texts.get(fc.larger)
                small = c.layout.texts.get(fc.smaller)
                if big is None or small is None:
                    continue
                ratio = big.size / small.size
                assert fc.min_ratio - 1e-6 <= ratio <= fc.max_ratio + 1e-6, (
                    c.id, c.blueprint.id, ratio)
                checked += 1
    report("number/description font ratio bands", checked >= 50,
           f"{checked} ratio constraints verified")


# -- criterion: scoring formulas ------------------------------------------------


def test_scoring_formulas_and_invariance(generated):
    from statviz.synth import informative_score, semantic_score, visual_score

    n = 0
    for _, candidates in generated:
        for c in candidates:
            s = c.scores
            assert visual_score(c) == s.visual
            assert informative_score(c) == s.informative
            assert semantic_score(c) == s.semantic
            assert s.total == 0.25 * s.semantic + 0.5 * s.visual + 0.25 * s.informative
            n += 1

    _, candidates = generated[0]
    base_ids = [c.id for c in rank(list(candidates), RankingWeights())]
    rng = np.random.default_rng(99)
    for _ in range(20):
        k = float(rng.uniform(0.05, 20.0))
        w = RankingWeights(0.25 * k, 0.5 * k, 0.25 * k)
        rescored = [score(c, w) for c in list(candidates)]
        assert [c.id for c in rank(rescored, w)] == base_ids
    for c in candidates:
        score(c, RankingWeights())
    report("scoring formulas exact + argsort invariance", True,
           f"{n} candidates recomputed exactly; 20 weight scalings stable")


# -- criterion: pictograph fidelity ----------------------------------------------


def _filled_fraction_from_svg(markup: str, assets, icon_id: str, palette) -> float:
    """Geometric filled-area fraction of a rendered pictograph."""
    root = ET.fromstring(markup)
    vw, vh, _ = assets.icon_markup(icon_id)
    icon_area = vw * vh
    total = 0.0
    filled = 0.0
    clip_rects = {}
    for cp in root.findall(f".//{{{SVG_NS}}}clipPath"):
        rect = cp.find(f"{{{SVG_NS}}}rect")
        clip_rects[cp.attrib["id"]] = float(rect.attrib["width"]) * float(rect.attrib["height"])
    for g in root.iter(f"{{{SVG_NS}}}g"):
        use = g.find(f"{{{SVG_NS}}}use")
        if use is None or use.attrib.get("href") != f"#icon-{icon_id}":
            continue
        fill = use.attrib.get("fill")
        clip = use.attrib.get("clip-path", "")
        if clip:
            cid = clip[len("url(#") : -1]
            area = clip_rects[cid]
        else:
            area = icon_area
        if fill == palette.graphic_primary:
            filled += area
        if not clip:
            total += icon_area
    return filled / total


def test_pictograph_fidelity(pipeline):
    assets = pipeline.assets

    group = pipeline.parse("2 in 5 adults drink coffee every morning.")
    candidates = synthesize(group, pipeline.assets)
    exact = next(
        c for c in candidates
        for g in c.layout.graphics.values()
        if g.spec.pictograph and g.spec.pictograph.count == 5
    )
    picto = next(g.spec.pictograph for g in exact.layout.graphics.values() if g.spec.pictograph)
    assert (picto.rows, picto.cols, picto.filled_full, picto.partial_fraction) == (1, 5, 2, 0.0)
    doc = render(exact, assets)
    icon_id = next(iter(exact.icons.values()))
    frac5 = _filled_fraction_from_svg(doc.markup, assets, icon_id, assets.palette(exact.palette_id))
    assert frac5 == pytest.approx(0.4, abs=1e-9)  # exact grid: zero error

    group = pipeline.parse("65% of adults drink coffee every morning.")
    candidates = synthesize(group, pipeline.assets)
    ten = next(
        c for c in candidates
        for g in c.layout.graphics.values()
        if g.spec.pictograph and g.spec.pictograph.rows == 1 and g.spec.pictograph.count == 10
    )
    picto = next(g.spec.pictograph for g in ten.layout.graphics.values() if g.spec.pictograph)
    assert picto.filled_full == 6 and picto.partial_fraction == pytest.approx(0.5)
    doc = render(ten, assets)
    icon_id = next(iter(ten.icons.values()))
    frac10 = _filled_fraction_from_svg(doc.markup, assets, icon_id, assets.palette(ten.palette_id))
    assert abs(frac10 - 0.65) <= 1 / 20
    report("pictograph fidelity", True,
           f"2-in-5 renders 2/5 filled exactly; 0.65 on 1x10 renders 6 + half "
           f"(geometric fraction {frac10:.4f})")


# -- criterion: end-to-end CLI ---------------------------------------------------


def test_end_to_end_generate(pipeline, tmp_path):
    statement = "More than 40% of students like football."

    started = time.perf_counter()
    group, ranked = pipeline.generate(statement, top_n=5)
    docs = [pipeline.render(c, seed=7) for c in ranked[:5]]
    elapsed = time.perf_counter() - started
    assert len(docs) >= 5
    for doc in docs:
        assert validate(doc) == []

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        code = cli_main(["generate", statement, "--top", "5", "--seed", "7",
                         "--out", str(out)])
        assert code == 0
    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted(p.name for p in out_b.iterdir())
    assert len([n for n in names if n.endswith(".svg")]) >= 5
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    by_bp = {}
    for c in synthesize(group, pipeline.assets):
        by_bp.setdefault(c.blueprint.id, c)
    dropper = by_bp["split-art-left"]
    keepers = [c for bp_id, c in by_bp.items()
               if bp_id in ("modifier-stack", "stack-number-top", "minimal-number")]
    assert all(dropper.scores.informative < k.scores.informative for k in keepers)

    report("end-to-end generate", elapsed < 2.0,
           f"top-5 in {elapsed:.2f}s < 2s after load; byte-identical reruns; "
           f"modifier-dropping alpha_i {dropper.scores.informative:.2f} < "
           f"{min(k.scores.informative for k in keepers):.2f}")


# -- criterion: multi-fact statement ----------------------------------------------


def test_multifact_accumulation_and_comparison(pipeline):
    statement = "60% of participants come from the US, while 40% come from Canada."
    group = pipeline.parse(statement)
    assert [f.value for f in group.facts] == [0.6, 0.4]
    candidates = synthesize(group, pipeline.assets)

    shared = [c for c in candidates if c.blueprint.id == "shared-center"]
    assert shared, "expected shared-center accumulation candidates"
    chart = next(g.spec.chart for g in shared[0].layout.graphics.values() if g.spec.chart)
    sweeps = [(s.start_angle, s.end_angle) for s in chart.sectors]
    assert sweeps[0] == (0.0, pytest.approx(216.0))
    assert sweeps[1] == (pytest.approx(216.0), pytest.approx(360.0))

    comparisons = [c for c in candidates if c.relation.value == "comparison"]
    assert comparisons, "expected side-by-side comparison candidates"
    report("multi-fact accumulation + comparison", True,
           f"sectors 216/144; {len(shared)} shared-center and "
           f"{len(comparisons)} comparison candidates")


# -- criterion: API contract ------------------------------------------------------


def test_api_contract_round_trip(pipeline, tmp_path):
    api = ApiServer(pipeline, templates_path=tmp_path / "templates.jsonl")
    port = api.start_background()
    base = f"http://127.0.0.1:{port}"
    try:
        created = requests.post(f"{base}/api/sessions", json={
            "statement": "65% of coffee are consumed in breakfast.", "seed": 2, "top": 10,
        })
        assert created.status_code == 200
        body = created.json()
        sid = body["session_id"]
        parent = next(c for c in body["candidates"] if c["icons"])

        refined = requests.post(
            f"{base}/api/sessions/{sid}/candidates/{parent['id']}/refine",
            json={"replace": {"palette": "coffee"}},
        )
        assert refined.status_code == 200
        child = refined.json()["candidate"]
        assert child["parent"] == parent["id"]

        exported = requests.get(f"{base}/api/export/{child['id']}.svg")
        assert exported.status_code == 200
        assert exported.content.decode("utf-8") == child["svg"]

        saved = requests.post(f"{base}/api/templates", json={
            "candidate_id": child["id"], "label": "coffee fact",
        })
        assert saved.status_code == 200
        tid = saved.json()["template_id"]
        reloaded = requests.get(f"{base}/api/templates/{tid}/svg")
        assert reloaded.status_code == 200
        assert reloaded.content == exported.content  # byte-identical re-render

        fill_parent = next(
            c for c in body["candidates"]
            if any(kind == "filled_icon" for kind in c["slots"].values())
        )
        slot = next(r for r, k in fill_parent["slots"].items() if k == "filled_icon")
        conflict = requests.post(
            f"{base}/api/sessions/{sid}/candidates/{fill_parent['id']}/refine",
            json={"replace": {"icon": "ring", "icon_slot": slot}},
        )
        assert conflict.status_code == 409
        assert conflict.json()["constraint"] == "hollow_not_fillable"

        assert requests.get(f"{base}/api/export/{sid}.zzz.svg").status_code == 404
    finally:
        api.stop()
    report("API contract round trip", True,
           "create -> refine -> export -> save -> reload byte-identical; hollow refine 409")
