"""Dataset-setup composition, K-Fold 5 protocol, dummy baseline, and reports.

The five built-in setups compose category subsets of a labeled pool
(political / positive / off-topic / natural / non-political poster); a
scale factor shrinks them proportionally for desk-scale runs. Every model
spec is evaluated with stratified K-fold cross-validation and the fold
metrics are averaged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .datamodel import CategoryLabel, DatasetManifest
from .encoder import FusionConfig
from .net import TrainConfig, default_hidden_dims, init_model, predict, train


class EvalError(ValueError):
    pass


# Table of built-in setup compositions (counts per category at paper scale).
SETUP_PRESETS = {
    1: {CategoryLabel.POLITICAL_OTHER: 8500, CategoryLabel.POLITICAL_POSTER: 3000,
        CategoryLabel.OFF_TOPIC: 1500},
    2: {CategoryLabel.POLITICAL_OTHER: 5500, CategoryLabel.POLITICAL_POSTER: 3000,
        CategoryLabel.OFF_TOPIC: 1500, CategoryLabel.NATURAL: 3000},
    3: {CategoryLabel.POLITICAL_OTHER: 3500, CategoryLabel.POLITICAL_POSTER: 3000,
        CategoryLabel.OFF_TOPIC: 1500, CategoryLabel.NATURAL: 5000},
    4: {CategoryLabel.POLITICAL_POSTER: 3000, CategoryLabel.NATURAL: 8200,
        CategoryLabel.NON_POLITICAL_POSTER: 1800},
    5: {CategoryLabel.POLITICAL_POSTER: 3000, CategoryLabel.OFF_TOPIC: 1500,
        CategoryLabel.NON_POLITICAL_POSTER: 1800},
}


@dataclass(frozen=True)
class DatasetSetup:
    index: str
    counts: dict  # CategoryLabel -> requested sample count
    seed: int = 0

    @classmethod
    def preset(cls, index: int, scale: float = 1.0, seed: int = 0) -> "DatasetSetup":
        """Built-in composition, optionally scaled down (floor, min 1)."""
        if index not in SETUP_PRESETS:
            raise EvalError(f"unknown setup preset {index}; choose 1-5")
        counts = {
            cat: max(1, int(count * scale)) for cat, count in SETUP_PRESETS[index].items()
        }
        return cls(index=str(index), counts=counts, seed=seed)


def compose_setup(pool: DatasetManifest, setup: DatasetSetup) -> DatasetManifest:
    """Sample counts[c] records per category without replacement, then shuffle."""
    rng = np.random.default_rng(setup.seed)
    by_category = {}
    for record in pool:
        by_category.setdefault(record.category, []).append(record)
    chosen = []
    for category, want in setup.counts.items():
        have = by_category.get(category, [])
        if want > len(have):
            raise EvalError(
                f"setup {setup.index}: need {want} {category.value} records, "
                f"pool has {len(have)} (short {want - len(have)})"
            )
        idx = rng.choice(len(have), size=want, replace=False)
        chosen.extend(have[i] for i in idx)
    order = rng.permutation(len(chosen))
    return DatasetManifest([chosen[i] for i in order])


def kfold_split(targets, k: int, seed: int):
    """Stratified K-fold over binary targets.

    Returns a list of (train_idx, test_idx) pairs. Test folds are disjoint,
    cover everything, sizes differ by at most 1, and per-class counts per
    fold differ by at most 1 (positives and negatives are each shuffled and
    dealt round-robin, with the deal position carried across classes so
    total fold sizes stay balanced).
    """
    y = np.asarray(targets).ravel()
    n = y.size
    if k < 2:
        raise EvalError(f"K must be >= 2, got {k}")
    if n < k:
        raise EvalError(f"too few samples ({n}) for K={k}")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    position = 0
    for cls in (1, 0):
        members = np.flatnonzero(y == cls)
        members = members[rng.permutation(members.size)]
        for i in members:
            fold_of[i] = position % k
            position += 1
    splits = []
    all_idx = np.arange(n)
    for fold in range(k):
        test = all_idx[fold_of == fold]
        trainset = all_idx[fold_of != fold]
        splits.append((trainset, test))
    return splits


def dummy_classifier(train_targets) -> int:
    """Majority class of the training fold; ties go negative."""
    y = np.asarray(train_targets).ravel()
    if y.size == 0:
        raise EvalError("training targets are empty")
    return 1 if np.count_nonzero(y == 1) > np.count_nonzero(y == 0) else 0


def metrics(predictions, targets) -> dict:
    """Accuracy, precision, recall from binary predictions.

    Empty denominators report 1.0 with a degenerate flag rather than NaN.
    """
    p = np.asarray(predictions).ravel()
    t = np.asarray(targets).ravel()
    if p.size != t.size:
        raise EvalError(f"length mismatch: {p.size} predictions vs {t.size} targets")
    if p.size == 0:
        raise EvalError("empty inputs")
    tp = int(np.count_nonzero((p == 1) & (t == 1)))
    fp = int(np.count_nonzero((p == 1) & (t == 0)))
    fn = int(np.count_nonzero((p == 0) & (t == 1)))
    tn = int(np.count_nonzero((p == 0) & (t == 0)))
    degenerate = []
    if tp + fp == 0:
        precision = 1.0
        degenerate.append("precision")
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 1.0
        degenerate.append("recall")
    else:
        recall = tp / (tp + fn)
    return {
        "accuracy": (tp + tn) / p.size,
        "precision": precision,
        "recall": recall,
        "confusion": {"tp": tp, "fp": fp, "fn": fn, "tn": tn},
        "degenerate": degenerate,
    }


@dataclass(frozen=True)
class ModelSpec:
    """One column of the comparison table.

    feature_source selects the input slice of the encoded matrix:
    'dummy' ignores features entirely, 'appearance' the first
    appearance_dim columns, 'text' the remaining n, 'fused' everything.
    """

    name: str
    feature_source: str  # dummy | appearance | text | fused
    depth: int = 1

    @classmethod
    def parse(cls, token: str) -> "ModelSpec":
        base = token.strip()
        depth = 1
        for suffix in ("-3L", "-3l", ":3"):
            if base.endswith(suffix):
                base = base[: -len(suffix)]
                depth = 3
        key = base.strip().lower()
        aliases = {
            "d": "dummy", "dummy": "dummy",
            "r": "appearance", "r-proxy": "appearance", "a": "appearance",
            "appearance": "appearance",
            "t": "text", "text": "text",
            "rt": "fused", "at": "fused", "fused": "fused",
        }
        if key not in aliases:
            raise EvalError(f"unknown model spec {token!r}")
        return cls(name=token.strip(), feature_source=aliases[key], depth=depth)


def _input_slice(spec: ModelSpec, fusion: FusionConfig):
    if spec.feature_source == "appearance":
        return slice(0, fusion.appearance_dim)
    if spec.feature_source == "text":
        return slice(fusion.appearance_dim, fusion.fused_dim)
    return slice(0, fusion.fused_dim)


def evaluate(
    X,
    y,
    model_specs,
    train_cfg: TrainConfig,
    fusion: FusionConfig,
    k: int = 5,
    seed: int = 0,
    composition: dict | None = None,
) -> dict:
    """K-fold evaluation of every model spec on an encoded dataset.

    Returns the EvalReport as a JSON-ready dict. A failure in one spec is
    recorded under that spec without aborting the others.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).ravel()
    splits = kfold_split(y, k, seed)
    report = {
        "config": {
            "kfold": k,
            "seed": seed,
            "epochs": train_cfg.epochs,
            "batch_size": train_cfg.batch_size,
            "learning_rate": train_cfg.learning_rate,
            "train_seed": train_cfg.seed,
            "fusion_k": fusion.k,
            "appearance_dim": fusion.appearance_dim,
            "vocab_n": fusion.n,
        },
        "composition": composition or {},
        "n_samples": int(y.size),
        "models": {},
    }
    for spec in model_specs:
        try:
            report["models"][spec.name] = _evaluate_spec(X, y, spec, splits, train_cfg, fusion)
        except Exception as e:  # isolate per-spec failures
            report["models"][spec.name] = {"error": f"{type(e).__name__}: {e}"}
    return report


def _evaluate_spec(X, y, spec, splits, train_cfg, fusion):
    folds = []
    histories = []
    cols = _input_slice(spec, fusion)
    for fold_idx, (train_idx, test_idx) in enumerate(splits):
        if spec.feature_source == "dummy":
            constant = dummy_classifier(y[train_idx])
            preds = np.full(test_idx.size, constant, dtype=np.int64)
            histories.append([])
        else:
            Xs = np.ascontiguousarray(X[:, cols])
            model = init_model(
                default_hidden_dims(Xs.shape[1], spec.depth),
                seed=train_cfg.seed + fold_idx,
            )
            cfg = TrainConfig(
                epochs=train_cfg.epochs,
                batch_size=train_cfg.batch_size,
                learning_rate=train_cfg.learning_rate,
                seed=train_cfg.seed + fold_idx,
            )
            history = train(model, Xs[train_idx], y[train_idx], cfg)
            histories.append(history)
            preds = predict(model, Xs[test_idx])
        folds.append(metrics(preds, y[test_idx]))
    mean = {
        key: float(np.mean([f[key] for f in folds]))
        for key in ("accuracy", "precision", "recall")
    }
    return {
        "feature_source": spec.feature_source,
        "depth": spec.depth,
        "folds": folds,
        "mean": mean,
        "loss_histories": histories,
    }


def render_table(reports: list[dict], setup_names: list[str]) -> str:
    """Aligned text table: one row per setup, one accuracy column per model."""
    model_names = []
    for report in reports:
        for name in report["models"]:
            if name not in model_names:
                model_names.append(name)
    header = ["Setup", "N"] + model_names
    rows = [header]
    for name, report in zip(setup_names, reports):
        row = [name, str(report["n_samples"])]
        for model in model_names:
            entry = report["models"].get(model)
            if entry is None:
                row.append("-")
            elif "error" in entry:
                row.append("ERR")
            else:
                row.append(f"{100 * entry['mean']['accuracy']:.1f}")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def save_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
