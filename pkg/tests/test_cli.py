import json

import pytest

from statviz.cli import main


def run_cli(args):
    return main(args)


def test_generate_writes_svgs_and_manifest(tmp_path):
    out = tmp_path / "out"
    code = run_cli([
        "generate", "More than 40% of students like football.",
        "--top", "5", "--out", str(out), "--seed", "3",
    ])
    assert code == 0
    svgs = sorted(out.glob("*.svg"))
    assert len(svgs) == 5
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["statement"] == "More than 40% of students like football."
    assert manifest["seed"] == 3
    assert len(manifest["candidates"]) == 5
    assert manifest["tags"][0] == ["More", "B-M"]
    totals = [c["scores"]["total"] for c in manifest["candidates"]]
    assert totals == sorted(totals, reverse=True)
    for entry in manifest["candidates"]:
        assert (out / entry["file"]).exists()


def test_generate_deterministic_bytes(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli([
            "generate", "65% of coffee are consumed in breakfast.",
            "--top", "3", "--out", str(out), "--seed", "7",
        ]) == 0
        outs.append(out)
    files_a = sorted(p.name for p in outs[0].iterdir())
    files_b = sorted(p.name for p in outs[1].iterdir())
    assert files_a == files_b
    for name in files_a:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name


def test_generate_unparsable_statement_exit_1(tmp_path, capsys):
    code = run_cli(["generate", "hello world", "--out", str(tmp_path / "x")])
    assert code == 1
    err = capsys.readouterr().err
    assert "NoNumberEntity" in err


def test_generate_weights_flag(tmp_path):
    out = tmp_path / "w"
    assert run_cli([
        "generate", "40% of students like football.",
        "--top", "2", "--out", str(out), "--weights", "0,1,0",
    ]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    top = manifest["candidates"][0]["scores"]
    assert top["total"] == top["visual"]


def test_generate_png_post_step(tmp_path):
    # a stand-in rasterizer (cp) proves the shell-out contract
    out = tmp_path / "png"
    code = run_cli([
        "generate", "40% of students like football.",
        "--top", "2", "--out", str(out),
        "--png", "--rasterizer", "cp {in} {out}",
    ])
    assert code == 0
    assert len(list(out.glob("*.png"))) == 2


def test_generate_png_missing_tool(tmp_path, capsys):
    code = run_cli([
        "generate", "40% of students like football.",
        "--top", "1", "--out", str(tmp_path / "x"),
        "--png", "--rasterizer", "no-such-rasterizer {in} {out}",
    ])
    assert code == 1
    assert "rasterizer not found" in capsys.readouterr().err


def test_generate_no_candidates_exit_2(tmp_path, capsys):
    # an unbreakable 250-char word cannot fit any blueprint at minimum font
    statement = "40% of " + "x" * 250 + " agree."
    code = run_cli(["generate", statement, "--out", str(tmp_path / "none")])
    assert code == 2
    err = capsys.readouterr().err
    assert "ruled out" in err


def test_tag_subcommand(capsys):
    assert run_cli(["tag", "More than 40% of students like football."]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0].split("\t")[:2] == ["More", "B-M"]
    assert all(0.0 <= float(line.split("\t")[2]) <= 1.0 for line in out)


def test_tag_unparsable_exit_1(capsys):
    assert run_cli(["tag", "   "]) == 1


def test_bundled_model_fits_training_corpus(capsys):
    # fit check: the shipped model scores its own corpus nearly perfectly
    from statviz.resources import data_path

    assert run_cli(["eval", "--corpus", str(data_path("corpus.conll"))]) == 0
    out = capsys.readouterr().out
    number_line = next(l for l in out.splitlines() if l.startswith("number"))
    f1 = float(number_line.split("F1=")[1].split()[0])
    assert f1 >= 0.95


def test_assets_summary_and_query(capsys):
    assert run_cli(["assets"]) == 0
    out = capsys.readouterr().out
    assert "icons: " in out and "palettes: " in out

    assert run_cli(["assets", "--query", "students football"]) == 0
    out = capsys.readouterr().out
    assert "student" in out


def test_train_and_eval_roundtrip(tmp_path, capsys):
    from statviz.corpus import load_corpus, save_corpus
    from statviz.resources import data_path

    small = load_corpus(data_path("corpus.conll"))
    small.sentences = small.sentences[:30]
    corpus_path = tmp_path / "small.conll"
    save_corpus(small, corpus_path)

    model_path = tmp_path / "model.txt"
    code = run_cli([
        "train", "--corpus", str(corpus_path), "--out", str(model_path),
        "--epochs", "8", "--kernels", "8", "--heldout", "0.2",
    ])
    assert code == 0
    assert model_path.exists()

    code = run_cli(["eval", "--corpus", str(corpus_path), "--model", str(model_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "number" in out and "F1=" in out


def test_eval_folds_output(tmp_path, capsys):
    from statviz.corpus import load_corpus, save_corpus
    from statviz.resources import data_path

    small = load_corpus(data_path("corpus.conll"))
    small.sentences = small.sentences[:20]
    corpus_path = tmp_path / "small.conll"
    save_corpus(small, corpus_path)
    code = run_cli([
        "eval", "--corpus", str(corpus_path), "--folds", "10", "--epochs", "2",
    ])
    assert code == 0
    out = capsys.readouterr().out.strip().splitlines()
    folds = [l for l in out if l.strip() and l.split()[0].isdigit()]
    assert len(folds) == 10
    assert out[-1].startswith("mean")


def test_train_determinism(tmp_path):
    from statviz.corpus import load_corpus, save_corpus
    from statviz.resources import data_path

    small = load_corpus(data_path("corpus.conll"))
    small.sentences = small.sentences[:20]
    corpus_path = tmp_path / "small.conll"
    save_corpus(small, corpus_path)

    paths = []
    for name in ("m1.txt", "m2.txt"):
        model_path = tmp_path / name
        assert run_cli([
            "train", "--corpus", str(corpus_path), "--out", str(model_path),
            "--epochs", "5", "--kernels", "6", "--seed", "11",
        ]) == 0
        paths.append(model_path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
