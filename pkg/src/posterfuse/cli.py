"""Command-line entry point: build-vocab, train, eval, plan.

Every subcommand is deterministic given its flags; all randomness is
seeded and the resolved configuration is echoed into the outputs.
Diagnostics go to stderr, data to files or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import curation, evalharness, storage, vocab
from .datamodel import load_manifest
from .encoder import FusionConfig, encode_dataset
from .net import TrainConfig, default_hidden_dims, init_model, save_checkpoint, train


def _load_annotations(manifest):
    for record in manifest:
        yield storage.read_annotation(record.annotation_ref, expected_id=record.id)


def cmd_build_vocab(args) -> int:
    manifest = load_manifest(args.manifest)
    hist = vocab.build_histogram(_load_annotations(manifest), cap=args.cap)
    vocabulary = vocab.truncate_top_k(hist, args.top_n)
    vocab.save_vocabulary(vocabulary, args.out)
    print(f"vocabulary of {len(vocabulary)} words written to {args.out}")
    print(f"distinct words: {len(hist.counts)}  cap: {hist.cap}  "
          f"dropped by cap: {hist.overflow_dropped}")
    print("top words:")
    for word, count in zip(vocabulary.words[:50], vocabulary.source_counts[:50]):
        print(f"  {word:24s} {count}")
    return 0


def _mode_matrix(X, mode, fusion):
    if mode == "appearance":
        return np.ascontiguousarray(X[:, : fusion.appearance_dim])
    if mode == "text":
        return np.ascontiguousarray(X[:, fusion.appearance_dim :])
    return X


def cmd_train(args) -> int:
    manifest = load_manifest(args.manifest)
    vocabulary = vocab.load_vocabulary(args.vocab)
    fusion = FusionConfig(k=args.k, appearance_dim=args.appearance_dim, n=len(vocabulary))
    X, y = encode_dataset(manifest, vocabulary, fusion)
    X = _mode_matrix(X, args.mode, fusion)
    model = init_model(default_hidden_dims(X.shape[1], args.depth), seed=args.seed)
    cfg = TrainConfig(
        epochs=args.epochs, batch_size=args.batch, learning_rate=args.lr, seed=args.seed
    )
    history = train(model, X, y, cfg)
    save_checkpoint(model, args.out_model)
    history_path = args.out_model + ".history.json"
    with open(history_path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "config": {
                    "mode": args.mode, "k": args.k, "depth": args.depth,
                    "epochs": args.epochs, "batch_size": args.batch,
                    "learning_rate": args.lr, "seed": args.seed,
                    "input_dim": int(X.shape[1]), "n_samples": int(X.shape[0]),
                },
                "loss_history": history,
            },
            f, indent=2,
        )
        f.write("\n")
    print(f"model written to {args.out_model}, loss history to {history_path}")
    print(f"final loss: {history[-1]:.6f}")
    return 0


def _parse_custom_counts(text):
    """'PoliticalOther=170,PoliticalPoster=60' -> DatasetSetup counts map."""
    from .datamodel import CategoryLabel

    counts = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        counts[CategoryLabel(name.strip())] = int(value)
    return counts


def cmd_eval(args) -> int:
    pool = load_manifest(args.pool_manifest)
    vocabulary = vocab.load_vocabulary(args.vocab)
    fusion = FusionConfig(k=args.k, appearance_dim=args.appearance_dim, n=len(vocabulary))
    if args.setup == "custom":
        if not args.counts:
            print("--setup custom requires --counts", file=sys.stderr)
            return 1
        setup = evalharness.DatasetSetup(
            index="custom", counts=_parse_custom_counts(args.counts), seed=args.seed
        )
    else:
        setup = evalharness.DatasetSetup.preset(
            int(args.setup), scale=args.scale, seed=args.seed
        )
    composed = evalharness.compose_setup(pool, setup)
    X, y = encode_dataset(composed, vocabulary, fusion)
    specs = [evalharness.ModelSpec.parse(tok) for tok in args.models.split(",")]
    cfg = TrainConfig(
        epochs=args.epochs, batch_size=args.batch, learning_rate=args.lr, seed=args.seed
    )
    composition = {cat.value: count for cat, count in sorted(
        composed.counts_by_category.items(), key=lambda kv: kv[0].value)}
    report = evalharness.evaluate(
        X, y, specs, cfg, fusion, k=args.kfold, seed=args.seed, composition=composition
    )
    report["setup"] = {"index": setup.index, "scale": args.scale, "seed": setup.seed}
    evalharness.save_report(report, args.report)
    print(evalharness.render_table([report], [setup.index]))
    print(f"report written to {args.report}")
    failures = [name for name, entry in report["models"].items() if "error" in entry]
    if failures:
        print(f"model failures: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


def cmd_plan(args) -> int:
    categories = curation.load_keyword_dir(args.keywords_dir)
    quotas = None
    if args.quotas:
        with open(args.quotas, encoding="utf-8") as f:
            raw = json.load(f)
        quotas = {str(k): int(v) for k, v in raw.items()}
    plan = curation.generate_query_plan(categories, suffix_quotas=quotas)
    curation.export_plan(plan, args.out)
    print(f"{len(plan.entries)} queries, total image budget {plan.total_budget}, "
          f"written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posterfuse",
        description="Political-poster classification toolkit: vocabulary, "
        "training, evaluation, and crawl planning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-vocab", help="build the top-n vocabulary from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--cap", type=int, default=vocab.DEFAULT_CAP)
    p.add_argument("--top-n", type=int, default=vocab.DEFAULT_TOP_N)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("train", help="train one classifier and save a checkpoint")
    p.add_argument("--manifest", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--mode", choices=["appearance", "text", "fused"], default="fused")
    p.add_argument("--k", type=float, default=0.5)
    p.add_argument("--appearance-dim", type=int, default=2048)
    p.add_argument("--depth", type=int, choices=[1, 3], default=3)
    p.add_argument("--epochs", type=int, default=90)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-model", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="K-fold comparison of model specs on a setup")
    p.add_argument("--pool-manifest", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--setup", default="1", choices=["1", "2", "3", "4", "5", "custom"])
    p.add_argument("--counts", help="custom setup counts, e.g. 'PoliticalPoster=60,Natural=160'")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--models", default="D,R-proxy,T,RT,RT-3L")
    p.add_argument("--kfold", type=int, default=5)
    p.add_argument("--k", type=float, default=0.5)
    p.add_argument("--appearance-dim", type=int, default=2048)
    p.add_argument("--epochs", type=int, default=90)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("plan", help="generate the keyword x suffix crawl plan CSV")
    p.add_argument("--keywords-dir", required=True)
    p.add_argument("--quotas", help="JSON file mapping suffix -> per-keyword image quota")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
