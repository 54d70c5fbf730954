"""Parallel training on data partitions and tree aggregation of hypotheses.

The main entry point trains r^h base hypotheses on disjoint partitions and
folds them through h rounds of Radon points, each round replacing groups of
exactly r hypotheses (contiguous blocks in creation order) by their Radon
point.  The averaging baseline trains on the same partitions and returns the
coordinate-wise mean instead.

All parallel work is dispatched to a bounded process pool and every task
writes its result into a slot fixed by partition or group id, so the output
is bit-identical for any worker count given the same seed.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset
from .errors import ConfigError, DataError
from .learners import Hypothesis, LearnerSpec, train
from .radon_points import radon_point


@dataclass(frozen=True)
class RadonConfig:
    """Aggregation-tree parameters.

    r must equal the hypothesis-space dimension plus 2.  ``shuffle_levels``
    re-permutes the hypothesis list with a seeded generator before each
    aggregation round; the default keeps creation order, which is already
    exchangeable because the partitions are a uniform shuffle.
    """

    r: int
    h: int
    seed: int
    n_min: int = 100
    workers: int = 1
    shuffle_levels: bool = False

    def __post_init__(self):
        if self.r < 3:
            raise ConfigError(f"Radon number must be >= 3, got {self.r}")
        if self.h < 0:
            raise ConfigError(f"tree height must be >= 0, got {self.h}")
        if self.n_min < 1:
            raise ConfigError(f"n_min must be >= 1, got {self.n_min}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass
class AggregationTrace:
    """Per-run accounting: tree shape, subset size, and phase wall times."""

    hypotheses_per_level: list[int] = field(default_factory=list)
    n_subset: int = 0
    wall_time_partition: float = 0.0
    wall_time_learning: float = 0.0
    wall_time_aggregation: float = 0.0
    deparallelisation_factor: float = 1.0


def max_height(n_rows: int, r: int, n_min: int) -> int:
    """Largest h with r^h * n_min <= n_rows, by exact integer arithmetic."""
    if r < 3:
        raise ConfigError(f"Radon number must be >= 3, got {r}")
    if n_min < 1:
        raise ConfigError(f"n_min must be >= 1, got {n_min}")
    if n_rows < n_min:
        return 0
    h = 0
    capacity = n_min
    while capacity * r <= n_rows:
        capacity *= r
        h += 1
    return h


def partition_indices(n_rows: int, parts: int, seed: int) -> list[np.ndarray]:
    """Seeded uniform shuffle, then contiguous blocks of near-equal size.

    The first ``n_rows % parts`` blocks receive one extra row.  Every row
    appears in exactly one block.
    """
    if parts < 1:
        raise ConfigError(f"parts must be >= 1, got {parts}")
    if parts > n_rows:
        raise DataError(f"cannot split {n_rows} rows into {parts} non-empty parts")
    perm = np.random.default_rng(seed).permutation(n_rows)
    base, extra = divmod(n_rows, parts)
    blocks = []
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        blocks.append(perm[start : start + size])
        start += size
    return blocks


def partition_dataset(data: Dataset, parts: int, seed: int) -> list[Dataset]:
    """Split a dataset into ``parts`` disjoint subsets (see partition_indices)."""
    return [data.subset(idx) for idx in partition_indices(data.n_rows, parts, seed)]


def training_seeds(seed: int, count: int) -> list[int]:
    """Deterministic, well-mixed per-partition training seeds."""
    state = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def _train_chunk(args) -> list[tuple[int, np.ndarray]]:
    spec, tasks = args
    out = []
    for slot, x, y, task, seed in tasks:
        hyp = train(spec, Dataset(x=x, y=y, task=task), seed)
        out.append((slot, hyp.weights))
    return out


def _radon_chunk(args) -> list[tuple[int, np.ndarray]]:
    tasks = args
    return [(slot, radon_point(group).point) for slot, group in tasks]


def _chunked(items: list, n_chunks: int) -> list[list]:
    n_chunks = max(1, min(n_chunks, len(items)))
    bounds = np.linspace(0, len(items), n_chunks + 1).astype(int)
    return [items[bounds[i] : bounds[i + 1]] for i in range(n_chunks) if bounds[i] < bounds[i + 1]]


def train_on_partitions(
    spec: LearnerSpec,
    data: Dataset,
    parts: int,
    seed: int,
    workers: int = 1,
    executor: ProcessPoolExecutor | None = None,
) -> tuple[np.ndarray, dict[str, float]]:
    """Train one hypothesis per partition; the shared path of both schemes.

    Returns the (parts, dim) weight matrix in partition order plus wall
    times for the partitioning and learning phases.
    """
    t0 = time.perf_counter()
    blocks = partition_indices(data.n_rows, parts, seed)
    seeds = training_seeds(seed, parts)
    tasks = [
        (i, data.x[blocks[i]], data.y[blocks[i]], data.task, seeds[i]) for i in range(parts)
    ]
    t1 = time.perf_counter()

    dim = spec.hypothesis_dim(data.dim)
    weights = np.empty((parts, dim))
    if workers == 1 and executor is None:
        for slot, x, y, task, s in tasks:
            weights[slot] = train(spec, Dataset(x=x, y=y, task=task), s).weights
    else:
        own_executor = executor is None
        ex = executor or ProcessPoolExecutor(max_workers=workers)
        try:
            chunks = _chunked(tasks, workers * 4)
            for result in ex.map(_train_chunk, [(spec, c) for c in chunks]):
                for slot, w in result:
                    weights[slot] = w
        finally:
            if own_executor:
                ex.shutdown()
    t2 = time.perf_counter()
    return weights, {"partition_s": t1 - t0, "learning_s": t2 - t1}


def _aggregate_levels(
    points: np.ndarray,
    cfg: RadonConfig,
    executor: ProcessPoolExecutor | None,
) -> tuple[np.ndarray, list[int]]:
    """Fold cfg.h levels of Radon points over the hypothesis matrix."""
    counts = [points.shape[0]]
    level_rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0x5EED)))
    for _ in range(cfg.h):
        if cfg.shuffle_levels:
            points = points[level_rng.permutation(points.shape[0])]
        groups = points.shape[0] // cfg.r
        nxt = np.empty((groups, points.shape[1]))
        tasks = [(g, points[g * cfg.r : (g + 1) * cfg.r]) for g in range(groups)]
        if executor is None or groups < cfg.workers:
            for slot, group in tasks:
                nxt[slot] = radon_point(group).point
        else:
            for result in executor.map(_radon_chunk, _chunked(tasks, cfg.workers)):
                for slot, point in result:
                    nxt[slot] = point
        points = nxt
        counts.append(groups)
    return points, counts


def radon_machine(
    spec: LearnerSpec, data: Dataset, cfg: RadonConfig
) -> tuple[Hypothesis, AggregationTrace]:
    """Train r^h partition models in parallel and fold them through h
    rounds of Radon points.

    Requires cfg.r == hypothesis dimension + 2 and enough rows for every
    partition to hold at least cfg.n_min examples.  With h = 0 this
    degenerates to training the base learner on the full dataset.
    """
    dim = spec.hypothesis_dim(data.dim)
    if cfg.r != dim + 2:
        raise ConfigError(
            f"Radon number {cfg.r} does not match hypothesis dimension {dim} "
            f"(expected r = {dim + 2})"
        )
    if cfg.h == 0:
        t0 = time.perf_counter()
        hyp = train(spec, data, cfg.seed)
        trace = AggregationTrace(
            hypotheses_per_level=[1],
            n_subset=data.n_rows,
            wall_time_learning=time.perf_counter() - t0,
        )
        return hyp, trace

    parts = cfg.r**cfg.h
    if data.n_rows < parts * cfg.n_min:
        raise DataError(
            f"need at least {parts * cfg.n_min} rows for r={cfg.r}, h={cfg.h}, "
            f"n_min={cfg.n_min}; got {data.n_rows}"
        )

    executor = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        weights, times = train_on_partitions(
            spec, data, parts, cfg.seed, workers=cfg.workers, executor=executor
        )
        t0 = time.perf_counter()
        final, counts = _aggregate_levels(weights, cfg, executor)
        agg_time = time.perf_counter() - t0
    finally:
        if executor is not None:
            executor.shutdown()

    trace = AggregationTrace(
        hypotheses_per_level=counts,
        n_subset=data.n_rows // parts,
        wall_time_partition=times["partition_s"],
        wall_time_learning=times["learning_s"],
        wall_time_aggregation=agg_time,
        deparallelisation_factor=max(1.0, parts / cfg.workers),
    )
    return Hypothesis(weights=final[0], fit_bias=spec.fit_bias), trace


def averaging_at_end(
    spec: LearnerSpec, data: Dataset, parts: int, seed: int, workers: int = 1
) -> Hypothesis:
    """Coordinate-wise mean of base hypotheses trained on the same
    partitions the Radon machine would use."""
    weights, _ = train_on_partitions(spec, data, parts, seed, workers=workers)
    return Hypothesis(weights=weights.mean(axis=0), fit_bias=spec.fit_bias)
