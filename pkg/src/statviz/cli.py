"""Command-line interface: generate, serve, train, eval, assets."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .app import Config, Pipeline, load_config, parse_weights
from .errors import NoCandidates, StatvizError


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--model", help="tagger model file")
    parser.add_argument("--assets", help="assets directory (icons.json, palettes.json, icons/)")
    parser.add_argument("--embeddings", help="embedding table file")
    parser.add_argument("--clusters", help="optional Brown cluster file")


def _config_from(args) -> Config:
    overrides = {
        "model_path": Path(args.model) if args.model else None,
        "assets_dir": Path(args.assets) if args.assets else None,
        "embeddings_path": Path(args.embeddings) if args.embeddings else None,
        "clusters_path": Path(args.clusters) if args.clusters else None,
    }
    if getattr(args, "templates", None):
        overrides["templates_path"] = Path(args.templates)
    if getattr(args, "port", None):
        overrides["port"] = args.port
    if getattr(args, "weights", None):
        overrides["weights"] = parse_weights(args.weights)
    return load_config(args.config, overrides)


def cmd_generate(args) -> int:
    config = _config_from(args)
    pipeline = Pipeline(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    try:
        group, ranked = pipeline.generate(args.statement, top_n=args.top)
    except NoCandidates as exc:
        print(f"no candidates: {exc}", file=sys.stderr)
        for reason in exc.reasons:
            print(f"  ruled out: {reason}", file=sys.stderr)
        return 2
    except StatvizError as exc:
        print(f"cannot parse statement: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - started

    top = ranked[: args.top]
    tagged = pipeline.tagger.tag(args.statement)
    entries = []
    svg_files = []
    for rank_i, candidate in enumerate(top, 1):
        doc = pipeline.render(candidate, seed=args.seed)
        name = f"cand_{rank_i:02d}_{candidate.id}.svg"
        (out_dir / name).write_bytes(doc.to_bytes())
        svg_files.append(out_dir / name)
        entries.append({"file": name, **candidate.manifest()})

    if args.png:
        import shlex
        import subprocess

        for svg_path in svg_files:
            png_path = svg_path.with_suffix(".png")
            cmd = [
                part.format(**{"in": str(svg_path), "out": str(png_path)})
                for part in shlex.split(args.rasterizer)
            ]
            try:
                subprocess.run(cmd, check=True, capture_output=True)
            except FileNotFoundError:
                print(f"rasterizer not found: {cmd[0]!r} (SVG output is complete)",
                      file=sys.stderr)
                return 1
            except subprocess.CalledProcessError as exc:
                print(f"rasterizer failed on {svg_path.name}: {exc.stderr.decode()[:200]}",
                      file=sys.stderr)
                return 1

    manifest = {
        "statement": args.statement,
        "seed": args.seed,
        "weights": list(pipeline.weights().__dict__.values()),
        "relation": group.relation.value,
        "facts": [f.to_dict() for f in group.facts],
        "tags": [[t.text, lab] for t, lab in zip(tagged.tokens, tagged.sequence.labels)],
        "candidates": entries,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(top)} candidates to {out_dir} ({elapsed:.2f}s)")
    return 0


def cmd_serve(args) -> int:
    import threading

    from .service import ApiServer

    config = _config_from(args)
    server = ApiServer(Pipeline(config), templates_path=config.templates_path,
                       webui_dir=Path(args.webui) if args.webui else None)
    port = server.start_background(config.port if args.port is None else args.port)
    print(f"serving on http://127.0.0.1:{port}", flush=True)
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        server.stop()
    return 0


def cmd_train(args) -> int:
    from .analyzer import evaluate, train
    from .corpus import ENTITY_NAMES, load_corpus
    from .embeddings import load_embeddings
    from .features import FeatureConfig, load_clusters

    config = _config_from(args)
    try:
        corpus = load_corpus(args.corpus)
        embeddings = load_embeddings(config.embeddings_path)
        clusters = load_clusters(config.clusters_path) if config.clusters_path else None
        feature_config = FeatureConfig(
            embedding_dim=embeddings.dim,
            cluster_bits=args.cluster_bits if clusters else 0,
        )
        train_part, held = corpus.split(heldout_fraction=args.heldout, seed=args.seed)
        model, report = train(
            train_part, feature_config, embeddings, clusters, heldout=held,
            kernel_width=args.kernel_width, kernel_count=args.kernels,
            max_epochs=args.epochs, seed=args.seed, step=args.step, l2=args.l2,
        )
    except StatvizError as exc:
        print(f"training failed: {exc}", file=sys.stderr)
        return 1
    model.save(args.out)
    print(f"trained {report.epochs_run} epochs (final loss {report.losses[-1]:.4f})")
    scores = evaluate(model, corpus, embeddings, clusters)
    for ent, s in scores.items():
        print(f"  {ENTITY_NAMES[ent]:10s} P={s.precision:.3f} R={s.recall:.3f} F1={s.f1:.3f}")
    print(f"saved {args.out}")
    return 0


def cmd_eval(args) -> int:
    from .analyzer import cross_validate, evaluate, fold_means
    from .corpus import ENTITY_NAMES, ENTITY_TYPES, load_corpus
    from .crf import TaggerModel
    from .embeddings import load_embeddings
    from .features import load_clusters

    config = _config_from(args)
    try:
        corpus = load_corpus(args.corpus)
        embeddings = load_embeddings(config.embeddings_path)
        clusters = load_clusters(config.clusters_path) if config.clusters_path else None
    except StatvizError as exc:
        print(f"eval failed: {exc}", file=sys.stderr)
        return 1

    if args.folds:
        model = TaggerModel.load(config.model_path)  # config echo for the header
        results = cross_validate(
            corpus, model.config, embeddings, clusters,
            k=args.folds, seed=args.seed, max_epochs=args.epochs,
        )
        header = "fold  " + "  ".join(f"{ENTITY_NAMES[t]:>10s}" for t in ENTITY_TYPES)
        print(header)
        for i, fold in enumerate(results, 1):
            row = "  ".join(f"{fold[t].f1:10.3f}" for t in ENTITY_TYPES)
            print(f"{i:4d}  {row}")
        means = fold_means(results)
        print("mean  " + "  ".join(f"{means[t]:10.3f}" for t in ENTITY_TYPES))
        return 0

    model = TaggerModel.load(config.model_path)
    scores = evaluate(model, corpus, embeddings, clusters)
    for ent, s in scores.items():
        print(f"{ENTITY_NAMES[ent]:10s} P={s.precision:.3f} R={s.recall:.3f} "
              f"F1={s.f1:.3f} (tp={s.tp} fp={s.fp} fn={s.fn})")
    return 0


def cmd_tag(args) -> int:
    config = _config_from(args)
    pipeline = Pipeline(config)
    try:
        tagged = pipeline.tagger.tag(args.statement, with_marginals=True)
    except StatvizError as exc:
        print(f"cannot tag statement: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    for i, (tok, label) in enumerate(zip(tagged.tokens, tagged.sequence.labels)):
        confidence = float(tagged.sequence.marginals[i].max())
        print(f"{tok.text}\t{label}\t{confidence:.3f}")
    print(f"# sequence log-probability: {tagged.sequence.score:.4f}", file=sys.stderr)
    return 0


def cmd_assets(args) -> int:
    from .assets import AssetLibrary
    from .embeddings import load_embeddings

    config = _config_from(args)
    library = AssetLibrary.load(config.assets_dir, load_embeddings(config.embeddings_path))
    if args.query:
        words = args.query.split()
        print("icons:")
        for m in library.match_icons(words, k=args.top):
            print(f"  {m.asset_id:14s} {m.similarity:.3f} ({m.query_word} ~ {m.keyword})")
        print("palettes:")
        for m in library.match_palettes(words, k=args.top):
            label = f"({m.query_word} ~ {m.keyword})" if m.keyword else "(generic)"
            print(f"  {m.asset_id:14s} {m.similarity:.3f} {label}")
    else:
        for key, count in library.summary().items():
            print(f"{key}: {count}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statviz",
        description="Turn a proportion statement into ranked infographic SVGs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render the top candidates for a statement")
    p.add_argument("statement")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--out", default="out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", help="ws,wv,wi (default 0.25,0.5,0.25)")
    p.add_argument("--png", action="store_true",
                   help="also rasterize each SVG with the external --rasterizer")
    p.add_argument("--rasterizer", default="rsvg-convert {in} -o {out}",
                   help="shell template with {in} and {out} placeholders")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="start the HTTP API and web UI")
    p.add_argument("--port", type=int)
    p.add_argument("--templates", help="template store file (JSON lines)")
    p.add_argument("--webui", help="directory of built web UI assets to serve")
    p.add_argument("--weights")
    _add_common(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("train", help="train a tagger model on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--kernels", type=int, default=32)
    p.add_argument("--kernel-width", type=int, default=3)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--l2", type=float, default=1e-3)
    p.add_argument("--heldout", type=float, default=0.1)
    p.add_argument("--cluster-bits", type=int, default=16)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a model on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--folds", type=int, help="k-fold cross-validation instead of one split")
    p.add_argument("--epochs", type=int, default=120)
    p.add_argument("--seed", type=int, default=13)
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tag", help="print token/label/confidence for a statement")
    p.add_argument("statement")
    _add_common(p)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("assets", help="inspect the asset library")
    p.add_argument("--query", help="words to match against icons and palettes")
    p.add_argument("--top", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_assets)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
