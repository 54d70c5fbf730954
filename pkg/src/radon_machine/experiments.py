"""Experiment orchestration: benchmarks, bound validation, bound tables.

Reports are plain dicts written as pretty JSON with sorted keys plus a flat
CSV of per-fold rows, so re-running a configuration with the same seed
reproduces every non-timing field exactly.  Wall-time fields all carry an
``_s`` suffix.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .aggregation import (
    RadonConfig,
    max_height,
    partition_indices,
    radon_machine,
    train_on_partitions,
)
from .bounds import ComplexityParams, efficiency_report
from .datasets import Dataset, kfold, load_dataset, synth_classification, synth_regression
from .errors import ConfigError
from .learners import Hypothesis, LearnerSpec, predict_score, train
from .metrics import auc, rmse
from .radon_points import radon_point

ALGORITHMS = ("base", "radon", "avg")

BENCHMARK_CSV_COLUMNS = [
    "algorithm",
    "fold",
    "metric",
    "partition_s",
    "learning_s",
    "aggregation_s",
    "total_s",
]

BOUNDS_CSV_COLUMNS = [
    "h",
    "delta",
    "log2_delta",
    "n_base",
    "n_radon",
    "m_sequential",
    "m_sequential_approx",
    "h_star",
    "runtime_radon_model",
    "runtime_sequential_model",
    "speedup_estimate",
    "inefficiency_estimate",
    "data_inefficiency",
    "guarantee_valid",
]

MC_CSV_COLUMNS = ["level", "empirical_bad_fraction", "theoretical_bound", "samples"]

# Trials per Monte-Carlo shard; fixed so results do not depend on workers.
MC_SHARD_TRIALS = 512
MC_MAX_LEAF_DRAWS = 100_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Benchmark setup; every field has a default and maps 1:1 to JSON."""

    dataset: dict = field(
        default_factory=lambda: {"source": "synthetic-classification", "n": 20000, "d": 8, "noise": 0.1}
    )
    learner: LearnerSpec = field(default_factory=LearnerSpec)
    algorithms: tuple[str, ...] = ("base", "radon", "avg")
    cv_folds: int = 10
    h: int | str = "max"
    n_min: int = 100
    shuffle_levels: bool = False
    seed: int = 0
    workers: int = 1
    out: str | None = None
    bounds: dict | None = None

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("algorithm set must be non-empty")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {name!r}, expected subset of {ALGORITHMS}")
        if self.cv_folds < 2:
            raise ConfigError("cv_folds must be >= 2")
        if isinstance(self.h, str) and self.h != "max":
            raise ConfigError(f"h must be an integer or 'max', got {self.h!r}")
        if isinstance(self.h, int) and self.h < 0:
            raise ConfigError("h must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = dict(raw)
        raw.pop("task", None)
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "learner" in raw and isinstance(raw["learner"], dict):
            learner_known = set(LearnerSpec.__dataclass_fields__)
            bad = set(raw["learner"]) - learner_known
            if bad:
                raise ConfigError(f"unknown learner fields: {sorted(bad)}")
            raw["learner"] = LearnerSpec(**raw["learner"])
        if "algorithms" in raw:
            raw["algorithms"] = tuple(raw["algorithms"])
        return cls(**raw)

    def to_dict(self) -> dict:
        return {
            "dataset": dict(self.dataset),
            "learner": {
                "loss": self.learner.loss,
                "reg_lambda": self.learner.reg_lambda,
                "epochs": self.learner.epochs,
                "learning_rate0": self.learner.learning_rate0,
                "fit_bias": self.learner.fit_bias,
            },
            "algorithms": list(self.algorithms),
            "cv_folds": self.cv_folds,
            "h": self.h,
            "n_min": self.n_min,
            "shuffle_levels": self.shuffle_levels,
            "seed": self.seed,
            "workers": self.workers,
            "out": self.out,
            "bounds": self.bounds,
        }


def resolve_dataset(spec: dict, default_seed: int) -> Dataset:
    """Build the dataset a config refers to (file or synthetic generator)."""
    spec = dict(spec)
    source = spec.get("source", "synthetic-classification")
    if source == "file":
        path = spec.get("path")
        if not path or not Path(path).exists():
            raise ConfigError(f"dataset path not resolvable: {path!r}")
        return load_dataset(path, spec.get("format", "csv"))
    seed = spec.get("seed")
    seed = default_seed if seed is None else seed
    n = int(spec.get("n", 20000))
    d = int(spec.get("d", 8))
    if source == "synthetic-classification":
        data, _ = synth_classification(n, d, float(spec.get("noise", 0.1)), seed)
        return data
    if source == "synthetic-regression":
        data, _ = synth_regression(n, d, float(spec.get("noise_sd", 0.1)), seed)
        return data
    raise ConfigError(f"unknown dataset source {source!r}")


def resolve_height(h: int | str, n_rows: int, r: int, n_min: int) -> int:
    """Turn the configured height (possibly 'max') into a feasible integer."""
    h_max = max_height(n_rows, r, n_min)
    if h == "max":
        return h_max
    h = int(h)
    if h > h_max:
        raise ConfigError(
            f"height {h} infeasible for {n_rows} rows with r={r}, n_min={n_min}; h_max={h_max}"
        )
    return h


def partition_checksum(row_ids: np.ndarray, parts: int, seed: int) -> str:
    """Stable digest of the exact row-id blocks a run would train on.

    ``row_ids`` are the global ids of the rows being partitioned (for a CV
    fold, the training-split indices), so equal checksums mean the same
    data rows land in the same partitions.
    """
    row_ids = np.asarray(row_ids, dtype=np.int64)
    digest = hashlib.sha1()
    for block in partition_indices(row_ids.size, parts, seed):
        digest.update(np.ascontiguousarray(row_ids[block]).tobytes())
        digest.update(b"|")
    return digest.hexdigest()


def _evaluate(hyp: Hypothesis, data: Dataset, test_idx: np.ndarray) -> float:
    scores = predict_score(hyp, data.x[test_idx])
    if data.task == "binary":
        return auc(scores, data.y[test_idx])
    return rmse(scores, data.y[test_idx])


def run_benchmark(config: ExperimentConfig) -> dict:
    """Cross-validated comparison of the configured algorithms.

    Trains each algorithm on every fold's training split, evaluates on the
    held-out fold (AUC for binary tasks, RMSE for regression), and records
    partitioning, learning, and aggregation wall times separately.  Writes
    a JSON report and a flat per-fold CSV when ``config.out`` is set.
    """
    data = resolve_dataset(config.dataset, config.seed)
    spec = config.learner
    dim = spec.hypothesis_dim(data.dim)
    r = dim + 2
    metric_name = "auc" if data.task == "binary" else "rmse"
    plan = kfold(data, config.cv_folds, config.seed)

    per_alg: dict[str, list[dict]] = {name: [] for name in config.algorithms}
    heights: list[int] = []
    for fold in range(config.cv_folds):
        train_idx = plan.train_indices(fold)
        train_split = data.subset(train_idx)
        test_idx = plan.test_indices(fold)
        h = resolve_height(config.h, train_split.n_rows, r, config.n_min)
        heights.append(h)
        parts = r**h
        for name in config.algorithms:
            row = _run_algorithm(name, spec, train_split, config, r, h, parts)
            row["fold"] = fold
            row["metric"] = _evaluate(row.pop("hypothesis"), data, test_idx)
            uses_partitions = name == "avg" or (name == "radon" and h > 0)
            row["partition_checksum"] = (
                partition_checksum(train_idx, parts, config.seed) if uses_partitions else None
            )
            per_alg[name].append(row)

    algorithms = {}
    for name, rows in per_alg.items():
        metrics = np.array([row["metric"] for row in rows])
        totals = np.array([row["total_s"] for row in rows])
        algorithms[name] = {
            "per_fold": rows,
            "metric_mean": float(metrics.mean()),
            "metric_std": float(metrics.std(ddof=1)) if len(rows) > 1 else 0.0,
            "total_s_mean": float(totals.mean()),
        }

    report = {
        "config": config.to_dict(),
        "dataset": {"n": data.n_rows, "d": data.dim, "task": data.task},
        "metric": metric_name,
        "radon_number": r,
        "heights_per_fold": heights,
        "algorithms": algorithms,
        "speedup_base_over_radon": None,
        "bounds": None,
    }
    if "base" in algorithms and "radon" in algorithms:
        radon_total = algorithms["radon"]["total_s_mean"]
        if radon_total > 0:
            report["speedup_base_over_radon"] = algorithms["base"]["total_s_mean"] / radon_total
    if config.bounds:
        params = ComplexityParams(
            alpha_eps=float(config.bounds["alpha_eps"]),
            beta_eps=float(config.bounds["beta_eps"]),
            k=int(config.bounds.get("k", 1)),
            kappa=int(config.bounds.get("kappa", 1)),
        )
        delta_base = float(config.bounds.get("delta_base", 1.0 / (2 * r)))
        report["bounds"] = efficiency_report(
            params, r, delta_base, heights[0], config.workers
        ).to_dict()

    if config.out:
        write_json(report, config.out)
        csv_rows = [
            {**row, "algorithm": name}
            for name in config.algorithms
            for row in algorithms[name]["per_fold"]
        ]
        write_csv(csv_rows, BENCHMARK_CSV_COLUMNS, _csv_path(config.out))
    return report


def _run_algorithm(
    name: str,
    spec: LearnerSpec,
    train_split: Dataset,
    config: ExperimentConfig,
    r: int,
    h: int,
    parts: int,
) -> dict:
    if name == "base":
        t0 = time.perf_counter()
        hyp = train(spec, train_split, config.seed)
        learn = time.perf_counter() - t0
        row = {"partition_s": 0.0, "learning_s": learn, "aggregation_s": 0.0}
    elif name == "radon":
        cfg = RadonConfig(
            r=r,
            h=h,
            seed=config.seed,
            n_min=config.n_min,
            workers=config.workers,
            shuffle_levels=config.shuffle_levels,
        )
        hyp, trace = radon_machine(spec, train_split, cfg)
        row = {
            "partition_s": trace.wall_time_partition,
            "learning_s": trace.wall_time_learning,
            "aggregation_s": trace.wall_time_aggregation,
        }
    elif name == "avg":
        weights, times = train_on_partitions(
            spec, train_split, parts, config.seed, workers=config.workers
        )
        t0 = time.perf_counter()
        hyp = Hypothesis(weights=weights.mean(axis=0), fit_bias=spec.fit_bias)
        row = {
            "partition_s": times["partition_s"],
            "learning_s": times["learning_s"],
            "aggregation_s": time.perf_counter() - t0,
        }
    else:  # pragma: no cover - guarded by ExperimentConfig
        raise ConfigError(f"unknown algorithm {name!r}")
    row["total_s"] = row["partition_s"] + row["learning_s"] + row["aggregation_s"]
    row["hypothesis"] = hyp
    return row


def _mc_shard(args) -> np.ndarray:
    """Simulate one shard of aggregation trees; returns bad counts per level.

    Hypotheses live in (r - 2)-dimensional space so the space's Radon number
    is exactly r.  Good draws are uniform in the unit-quality ball around a
    fixed target, bad draws sit at twice that distance, and the bad
    probability is exact by construction, so the per-level bad fractions
    can be compared sharply against (r * delta_base) ** (2 ** level).
    """
    r, h, delta_base, n_trials, seed, shard_idx, eps = args
    d = r - 2
    leaves = r**h
    rng = np.random.default_rng(np.random.SeedSequence((seed, shard_idx)))
    m = n_trials * leaves
    bad = rng.random(m) < delta_base
    directions = rng.standard_normal((m, d))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0.0] = 1.0
    directions /= norms[:, None]
    radii = np.where(bad, 2.0 * eps, eps * rng.random(m) ** (1.0 / d))
    points = directions * radii[:, None]

    counts = np.zeros(h + 1, dtype=np.int64)
    counts[0] = int(bad.sum())
    current = points.reshape(n_trials, leaves, d)
    for level in range(1, h + 1):
        groups = current.shape[1] // r
        nxt = np.empty((n_trials, groups, d))
        for t in range(n_trials):
            for g in range(groups):
                nxt[t, g] = radon_point(current[t, g * r : (g + 1) * r]).point
        counts[level] = int((np.linalg.norm(nxt.reshape(-1, d), axis=1) > eps).sum())
        current = nxt
    return counts


def mc_confidence(
    r: int,
    h: int,
    delta_base: float,
    trials: int,
    seed: int,
    workers: int = 1,
    eps: float = 1.0,
) -> dict:
    """Monte-Carlo check of the per-level failure bound.

    Builds ``trials`` full aggregation trees from fresh draws and reports,
    per level, the fraction of surviving hypotheses whose quality exceeds
    eps next to the theoretical bound.  Trials are simulated in fixed-size
    shards with independent seeds and merged by summation, so the result
    does not depend on the worker count.
    """
    if r < 3:
        raise ConfigError(f"Radon number must be >= 3, got {r}")
    if h < 0:
        raise ConfigError("height must be >= 0")
    if not 0.0 <= delta_base < 1.0:
        raise ConfigError(f"delta_base must lie in [0, 1), got {delta_base}")
    if trials < 1000:
        raise ConfigError(f"need at least 1000 trials, got {trials}")
    if trials * r**h > MC_MAX_LEAF_DRAWS:
        raise ConfigError(
            f"trials * r^h = {trials * r**h} exceeds the cap of {MC_MAX_LEAF_DRAWS} leaf draws"
        )

    shards = []
    remaining = trials
    idx = 0
    while remaining > 0:
        size = min(MC_SHARD_TRIALS, remaining)
        shards.append((r, h, delta_base, size, seed, idx, eps))
        remaining -= size
        idx += 1

    counts = np.zeros(h + 1, dtype=np.int64)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for shard_counts in ex.map(_mc_shard, shards):
                counts += shard_counts
    else:
        for shard in shards:
            counts += _mc_shard(shard)

    rows = []
    for level in range(h + 1):
        samples = trials * r ** (h - level)
        try:
            bound = float(r * delta_base) ** (2**level)
        except OverflowError:
            bound = float("inf")
        rows.append(
            {
                "level": level,
                "empirical_bad_fraction": float(counts[level]) / samples,
                "theoretical_bound": bound,
                "samples": samples,
            }
        )
    return {
        "r": r,
        "h": h,
        "delta_base": delta_base,
        "trials": trials,
        "eps": eps,
        "bound_precondition_met": delta_base <= 1.0 / (2 * r),
        "rows": rows,
    }


def bounds_table(
    params: ComplexityParams,
    r: int,
    delta_base: float,
    h_range,
    c_workers: int = 1,
) -> list[dict]:
    """One efficiency report row per height in ``h_range``."""
    rows = []
    for h in h_range:
        report = efficiency_report(params, r, delta_base, int(h), c_workers)
        rows.append({key: getattr(report, key) for key in BOUNDS_CSV_COLUMNS})
    return rows


def write_json(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[dict], columns: list[str], path: str | Path) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(col)) for col in columns))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _csv_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".csv")
