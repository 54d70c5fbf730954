"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
as they happen; without ``-s`` they appear in the captured-output section
of any failure.
"""

import math
import os
import time
from dataclasses import replace
from itertools import product

import numpy as np
import pytest
from conftest import draw_convex_function, straight_line_radon_machine

from radon_machine import (
    ComplexityParams,
    Dataset,
    LearnerSpec,
    RadonConfig,
    averaging_at_end,
    auc,
    boosted_confidence,
    certify,
    choose_height,
    kfold,
    max_height,
    mc_confidence,
    partition_indices,
    predict_score,
    radon_machine,
    radon_point,
    radon_sample_size,
    runtime_model,
    sample_complexity_rademacher,
    sample_complexity_vc,
    sequential_sample_size,
    synth_classification,
    synth_regression,
    train,
)


def _verdict(criterion: str, ok: bool, detail: str) -> str:
    line = f"[{criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    return line


def _random_point_sets(count: int, seed: int):
    """Random sets plus degenerate ones (duplicates, collinear)."""
    rng = np.random.default_rng(seed)
    sets = []
    for i in range(count):
        dim = int(rng.integers(1, 9))
        points = rng.standard_normal((dim + 2, dim))
        if i % 10 == 8:  # duplicate one point over another
            points[int(rng.integers(dim + 2))] = points[int(rng.integers(dim + 2))]
        elif i % 10 == 9 and dim >= 2:  # collapse the set onto a line
            direction = rng.standard_normal(dim)
            offset = rng.standard_normal(dim)
            ts = rng.standard_normal(dim + 2)
            points = offset + np.outer(ts, direction)
        sets.append(points)
    return sets


def test_a1_radon_point_correctness():
    sets = _random_point_sets(1000, seed=101)
    start = time.perf_counter()
    worst = 0.0
    for points in sets:
        cert = radon_point(points)
        tol = 1e-8 * (1.0 + float(np.abs(points).max()))
        residual = certify(points, cert)
        worst = max(worst, residual / tol)
        assert residual <= tol
    elapsed = time.perf_counter() - start
    ok = elapsed < 5.0
    detail = f"1000 sets certified, worst residual {worst:.2e} of tolerance, {elapsed:.2f}s"
    _verdict("A1", ok, detail)
    assert ok, detail


def test_a2_two_witness_and_robustness():
    rng = np.random.default_rng(202)
    witness_violations = 0
    outlier_violations = 0
    for _ in range(1000):
        dim = int(rng.integers(1, 9))
        points = rng.standard_normal((dim + 2, dim))
        q = draw_convex_function(rng, dim)
        q_radon = q(radon_point(points).point)
        values = sorted((q(p) for p in points), reverse=True)
        if sum(1 for v in values if v >= q_radon - 1e-9) < 2:
            witness_violations += 1
        if q_radon > values[1] + 1e-9:
            outlier_violations += 1
    ok = witness_violations == 0 and outlier_violations == 0
    detail = (
        f"1000 convex probes: {witness_violations} witness violations, "
        f"{outlier_violations} outlier violations"
    )
    _verdict("A2", ok, detail)
    assert ok, detail


def test_a3_confidence_bound_monte_carlo():
    start = time.perf_counter()
    result = mc_confidence(r=4, h=2, delta_base=0.125, trials=10_000, seed=303, workers=1)
    elapsed = time.perf_counter() - start
    rows = {row["level"]: row for row in result["rows"]}
    checks = []
    for level in (1, 2):
        bound = rows[level]["theoretical_bound"]
        sigma = math.sqrt(bound * (1.0 - bound) / rows[level]["samples"])
        checks.append(rows[level]["empirical_bad_fraction"] <= bound + 3.0 * sigma)
    ok = all(checks) and elapsed < 60.0
    detail = (
        f"level1 {rows[1]['empirical_bad_fraction']:.4f} <= {rows[1]['theoretical_bound']}+3s, "
        f"level2 {rows[2]['empirical_bad_fraction']:.4f} <= {rows[2]['theoretical_bound']}+3s, "
        f"{elapsed:.1f}s single-threaded"
    )
    _verdict("A3", ok, detail)
    assert ok, detail


@pytest.mark.parametrize(
    "loss,d,fit_bias,h,n_min",
    [
        ("squared", 1, True, 2, 25),   # 1-d regression, r = 4, 16 partitions
        ("logistic", 2, False, 3, 30),  # r = 4, 64 partitions
    ],
)
def test_a4_sequential_oracle_equivalence(loss, d, fit_bias, h, n_min):
    spec = LearnerSpec(loss=loss, reg_lambda=0.2, epochs=2, fit_bias=fit_bias)
    r = (d + 1 if fit_bias else d) + 2
    if loss == "squared":
        data, _ = synth_regression(r**h * n_min, d, 0.3, seed=40 + d)
    else:
        data, _ = synth_classification(r**h * n_min, d, 0.1, seed=40 + d)
    reference = straight_line_radon_machine(spec, data, r=r, h=h, seed=44)
    mismatches = []
    for workers in (1, 2, 7, 16):
        cfg = RadonConfig(r=r, h=h, seed=44, n_min=n_min, workers=workers)
        hyp, _ = radon_machine(spec, data, cfg)
        if not np.array_equal(hyp.weights, reference):
            mismatches.append(workers)
    ok = not mismatches
    detail = f"{loss} d={d} h={h}: bit-identical for workers 1,2,7,16" if ok else (
        f"{loss} d={d} h={h}: mismatch at workers {mismatches}"
    )
    _verdict("A4", ok, detail)
    assert ok, detail


class TestA5QualityParity:
    N = 200_000
    D = 8
    NOISE = 0.1
    SEED = 2024
    SPEC = LearnerSpec(loss="squared", reg_lambda=1.0, fit_bias=True)

    def test_a5_parity_and_adversarial_margin(self):
        data, w_true = synth_classification(self.N, self.D, self.NOISE, self.SEED)
        r = self.D + 3  # feature dim + bias + 2
        plan = kfold(data, 10, self.SEED)

        base_auc, radon_auc = [], []
        for fold in range(10):
            train_split = data.subset(plan.train_indices(fold))
            test_idx = plan.test_indices(fold)
            h = max_height(train_split.n_rows, r, 100)
            hyp_base = train(self.SPEC, train_split, self.SEED)
            cfg = RadonConfig(r=r, h=h, seed=self.SEED, n_min=100)
            hyp_radon, _ = radon_machine(self.SPEC, train_split, cfg)
            base_auc.append(auc(predict_score(hyp_base, data.x[test_idx]), data.y[test_idx]))
            radon_auc.append(auc(predict_score(hyp_radon, data.x[test_idx]), data.y[test_idx]))
        parity_gap = abs(float(np.mean(base_auc)) - float(np.mean(radon_auc)))

        adv_gap = self._adversarial_gap(data, w_true, r)
        ok = parity_gap <= 0.02 and adv_gap >= 0.03
        detail = (
            f"parity gap {parity_gap:.4f} (<= 0.02), "
            f"adversarial radon-minus-avg {adv_gap:.4f} (>= 0.03)"
        )
        _verdict("A5", ok, detail)
        assert ok, detail

    def _adversarial_gap(self, data, w_true, r) -> float:
        """Two-cluster stress: exactly one partition per aggregation group is
        poisoned with large labels aligned to a direction orthogonal to the
        true separator, pulling the coordinate-wise mean off target while
        each Radon group absorbs its single outlier."""
        rng = np.random.default_rng(self.SEED + 1)
        w_adv = rng.standard_normal(self.D)
        w_adv -= (w_adv @ w_true) * w_true
        w_adv /= np.linalg.norm(w_adv)
        plan = kfold(data, 10, self.SEED)

        radon_scores, avg_scores = [], []
        for fold in range(10):
            train_idx = plan.train_indices(fold)
            test_idx = plan.test_indices(fold)
            h = max_height(train_idx.size, r, 100)
            parts = r**h
            blocks = partition_indices(train_idx.size, parts, self.SEED)
            x_train = data.x[train_idx]
            y_poisoned = data.y[train_idx].copy()
            for first_of_group in range(0, parts, r):
                rows = blocks[first_of_group]
                y_poisoned[rows] = 50.0 * np.sign(x_train[rows] @ w_adv)
            poisoned = Dataset(x=x_train, y=y_poisoned, task="regression")

            cfg = RadonConfig(r=r, h=h, seed=self.SEED, n_min=100)
            hyp_radon, _ = radon_machine(self.SPEC, poisoned, cfg)
            hyp_avg = averaging_at_end(self.SPEC, poisoned, parts, self.SEED)
            radon_scores.append(
                auc(predict_score(hyp_radon, data.x[test_idx]), data.y[test_idx])
            )
            avg_scores.append(auc(predict_score(hyp_avg, data.x[test_idx]), data.y[test_idx]))
        return float(np.mean(radon_scores) - np.mean(avg_scores))


def test_a6_measured_speedup():
    workers = 8
    n, d = 1_000_000, 8
    r = d + 3
    data, _ = synth_classification(n, d, 0.1, seed=606)

    probe = LearnerSpec(loss="logistic", reg_lambda=1e-3, epochs=1, learning_rate0=0.1)
    t0 = time.perf_counter()
    train(probe, data, 606)
    epoch_s = time.perf_counter() - t0
    epochs = max(2, math.ceil(24.0 / epoch_s))
    spec = replace(probe, epochs=epochs)

    t0 = time.perf_counter()
    train(spec, data, 606)
    base_s = time.perf_counter() - t0

    h = max_height(n, r, 100)
    cfg = RadonConfig(r=r, h=h, seed=606, n_min=100, workers=workers)
    t0 = time.perf_counter()
    radon_machine(spec, data, cfg)
    radon_s = time.perf_counter() - t0

    ok = base_s >= 20.0 and radon_s <= 0.5 * base_s
    detail = (
        f"base {base_s:.1f}s (epochs={epochs}), radon(h={h}) {radon_s:.1f}s with "
        f"{workers} workers on {os.cpu_count()} cpus, ratio {radon_s / base_s:.2f} (need <= 0.50)"
    )
    _verdict("A6", ok, detail)
    assert ok, detail


def test_a7_theory_worked_values_and_monotonicity():
    rel = 1e-9
    worked = [
        (boosted_confidence(4, 0.125, 1).delta, 0.25),
        (boosted_confidence(4, 0.125, 2).delta, 0.0625),
        (choose_height(1024.0, 1), 7),
        (choose_height(1024.0, 2), 4),
        (sample_complexity_vc(0.1, 0.5), (800.0 * math.log(2.0)) ** 2),
        (sample_complexity_rademacher(0.5, 0.5, 0.0), 2.0),
        (sample_complexity_rademacher(0.5, 0.25, 0.2), 100.0),
        (
            sequential_sample_size(ComplexityParams(0.0, 1.0, 1, 1), 4, 0.125, 3),
            8.0,
        ),
        (
            sequential_sample_size(ComplexityParams(1.0, 1.0, 2, 1), 4, 1.0 / 16.0, 1),
            25.0,
        ),
        (runtime_model(10, 3, 1, 1, 1), 111.0),
        (radon_sample_size(10, 4, 100), 1e6),
    ]
    value_failures = [
        (got, want) for got, want in worked if abs(got - want) > rel * max(1.0, abs(want))
    ]

    grid_checked = 0
    grid_failures = 0
    alpha_beta = [
        (0.0, 1.0),
        (1.0, 1.0),
        (0.5, 2.0),
        (2.5, 0.7),
        (10.0, 3.0),
        (277.26, 277.26),
    ]
    for r, k in product(range(3, 28), (1, 2)):
        if r < 2**k:  # data replication beats sequential growth only here
            continue
        for alpha, beta in alpha_beta:
            params = ComplexityParams(alpha_eps=alpha, beta_eps=beta, k=k, kappa=1)
            for scale in (2.0, 8.0, 64.0, 512.0, 4096.0):
                delta_base = 1.0 / (scale * r)
                prev_log = None
                prev_m = None
                for h in range(1, 8):
                    boost = boosted_confidence(r, delta_base, h)
                    m_seq = sequential_sample_size(params, r, delta_base, h)
                    n_radon = radon_sample_size(r, h, params.base_sample_size(delta_base))
                    if n_radon < m_seq * (1.0 - 1e-12):
                        grid_failures += 1
                    if prev_log is not None and not boost.log2_delta < prev_log:
                        grid_failures += 1
                    if prev_m is not None and not m_seq > prev_m:
                        grid_failures += 1
                    prev_log, prev_m = boost.log2_delta, m_seq
                    grid_checked += 1

    ok = not value_failures and grid_failures == 0 and grid_checked >= 10_000
    detail = (
        f"{len(worked)} worked values at 1e-9, {grid_checked} grid tuples, "
        f"{grid_failures} monotonicity violations"
    )
    if value_failures:
        detail += f"; value mismatches {value_failures}"
    _verdict("A7", ok, detail)
    assert ok, detail


def test_a8_metric_oracles():
    rng = np.random.default_rng(808)
    mismatches = 0
    for _ in range(500):
        n = int(rng.integers(2, 200))
        scores = np.round(rng.standard_normal(n), 1)
        labels = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        if (labels > 0).all() or (labels < 0).all():
            labels[0] *= -1.0
        pos = scores[labels > 0]
        neg = scores[labels < 0]
        brute = sum(
            1.0 if sp > sn else 0.5 if sp == sn else 0.0 for sp in pos for sn in neg
        ) / (pos.size * neg.size)
        if auc(scores, labels) != brute:
            mismatches += 1

    data, w_true = synth_regression(2000, 6, noise_sd=0.0, seed=81)
    errors = []
    for lam in (0.0, 1e-9):
        spec = LearnerSpec(loss="squared", reg_lambda=lam, fit_bias=False)
        hyp = train(spec, data, seed=0)
        errors.append(float(np.abs(hyp.weights - w_true).max()))

    ok = mismatches == 0 and max(errors) < 1e-6
    detail = (
        f"500 AUC instances exact ({mismatches} mismatches), "
        f"noiseless recovery error {max(errors):.2e} (< 1e-6)"
    )
    _verdict("A8", ok, detail)
    assert ok, detail
