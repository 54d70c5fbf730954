"""Shared test helpers: convex probe functions and a straight-line reference
implementation of the partition-train-aggregate pipeline."""

from __future__ import annotations

import numpy as np

from radon_machine import partition_indices, radon_point, train, training_seeds


def draw_convex_function(rng: np.random.Generator, dim: int):
    """One random convex probe: a PSD quadratic, a max of affine maps, or a
    distance to a random center."""
    kind = rng.integers(3)
    if kind == 0:
        m = rng.standard_normal((dim, dim))
        c = rng.standard_normal(dim)
        return lambda x: float((x - c) @ (m.T @ m) @ (x - c))
    if kind == 1:
        a = rng.standard_normal((5, dim))
        b = rng.standard_normal(5)
        return lambda x: float(np.max(a @ x + b))
    c = rng.standard_normal(dim)
    return lambda x: float(np.linalg.norm(x - c))


def straight_line_radon_machine(spec, data, r: int, h: int, seed: int) -> np.ndarray:
    """Sequential single-threaded reference: train every partition model in
    order, then fold contiguous groups of r through Radon points."""
    parts = r**h
    blocks = partition_indices(data.n_rows, parts, seed)
    seeds = training_seeds(seed, parts)
    points = [train(spec, data.subset(ix), s).weights for ix, s in zip(blocks, seeds)]
    while len(points) > 1:
        points = [
            radon_point(np.stack(points[g * r : (g + 1) * r])).point
            for g in range(len(points) // r)
        ]
    return points[0]
