"""Linear base learners: convex losses with L2 regularisation.

A hypothesis is a plain vector of weights; with ``fit_bias`` the bias is
appended as the last coordinate, so the hypothesis space stays a plain
Euclidean space of dimension d + 1 and aggregation can treat hypotheses as
points.  The regulariser (reg_lambda / 2) * ||w||^2 covers all coordinates,
bias included.

Training minimises the summed objective

    risk(w) = sum_i loss(<w, x_i>, y_i) + (reg_lambda / 2) * ||w||^2.

Squared loss uses an exact normal-equations solve for moderate dimensions.
The other losses run per-example stochastic gradient descent over data
reshuffled each epoch by a seeded generator, with the decaying step size

    eta_t = eta0 / (1 + eta0 * reg_lambda * t / n).

Each step follows the gradient of loss_i + (reg_lambda / (2n)) * ||w||^2,
an unbiased estimate of risk / n, so the stationary target is the summed
objective above; the decay constant reg_lambda / n matches that per-step
objective's regulariser.  Training is a pure function of (spec, data, seed)
and instances share no state, so any number may run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .errors import ConfigError, DataError, ShapeError

# Dimension limit for the exact normal-equations path of the squared loss.
EXACT_SOLVE_MAX_DIM = 512

LOSS_NAMES = ("logistic", "hinge", "squared")
CLASSIFICATION_LOSSES = ("logistic", "hinge")


@dataclass(frozen=True)
class LearnerSpec:
    """Configuration of the base learner."""

    loss: str = "logistic"
    reg_lambda: float = 1e-3
    epochs: int = 10
    learning_rate0: float = 0.1
    fit_bias: bool = True

    def __post_init__(self):
        if self.loss not in LOSS_NAMES:
            raise ConfigError(f"unknown loss {self.loss!r}, expected one of {LOSS_NAMES}")
        if self.reg_lambda < 0:
            raise ConfigError("reg_lambda must be >= 0")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if not self.learning_rate0 > 0:
            raise ConfigError("learning_rate0 must be > 0")

    def hypothesis_dim(self, data_dim: int) -> int:
        return data_dim + 1 if self.fit_bias else data_dim


@dataclass(frozen=True)
class Hypothesis:
    """Immutable linear model; bias, when fitted, is the last weight."""

    weights: np.ndarray
    fit_bias: bool

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ShapeError(f"weights must be a non-empty vector, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ShapeError("weights contain non-finite values")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return int(self.weights.size)


def loss_values(loss: str, scores, labels) -> np.ndarray:
    """Per-example loss at the given raw scores."""
    z = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if loss == "logistic":
        return np.logaddexp(0.0, -y * z)
    if loss == "hinge":
        return np.maximum(0.0, 1.0 - y * z)
    if loss == "squared":
        return 0.5 * (z - y) ** 2
    raise ConfigError(f"unknown loss {loss!r}")


def loss_derivatives(loss: str, scores, labels) -> np.ndarray:
    """d loss / d score, used by the SGD step and the gradient checks."""
    z = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if loss == "logistic":
        m = y * z
        # -y * sigmoid(-m), with the stable branch picked per sign of m.
        em = np.exp(-np.abs(m))
        sig_neg_m = np.where(m >= 0.0, em / (1.0 + em), 1.0 / (1.0 + em))
        return -y * sig_neg_m
    if loss == "hinge":
        return np.where(y * z < 1.0, -y, 0.0)
    if loss == "squared":
        return z - y
    raise ConfigError(f"unknown loss {loss!r}")


def _augmented(x: np.ndarray, fit_bias: bool) -> np.ndarray:
    if not fit_bias:
        return x
    return np.hstack([x, np.ones((x.shape[0], 1))])


def _check_labels(spec: LearnerSpec, data: Dataset) -> None:
    if data.n_rows == 0:
        raise DataError("cannot train on an empty dataset")
    if spec.loss in CLASSIFICATION_LOSSES:
        if not np.all(np.isin(data.y, (-1.0, 1.0))):
            raise DataError(f"{spec.loss} loss requires labels in {{-1, +1}}")


def train(spec: LearnerSpec, data: Dataset, seed: int) -> Hypothesis:
    """Fit a linear model; deterministic given (spec, data, seed)."""
    _check_labels(spec, data)
    xa = _augmented(data.x, spec.fit_bias)
    n, p = xa.shape

    if spec.loss == "squared" and p <= EXACT_SOLVE_MAX_DIM:
        w = _solve_normal_equations(xa, data.y, spec.reg_lambda)
        return Hypothesis(weights=w, fit_bias=spec.fit_bias)

    rng = np.random.default_rng(seed)
    w = np.zeros(p)
    lr0 = spec.learning_rate0
    decay = lr0 * spec.reg_lambda / n
    reg_step = spec.reg_lambda / n
    t = 0
    for _ in range(spec.epochs):
        order = rng.permutation(n)
        for i in order:
            xi = xa[i]
            g = loss_derivatives(spec.loss, xi @ w, data.y[i])
            eta = lr0 / (1.0 + decay * t)
            w -= eta * (g * xi + reg_step * w)
            t += 1
    return Hypothesis(weights=w, fit_bias=spec.fit_bias)


def _solve_normal_equations(xa: np.ndarray, y: np.ndarray, reg_lambda: float) -> np.ndarray:
    """Exact minimiser of the summed squared-loss objective."""
    if reg_lambda > 0.0:
        gram = xa.T @ xa + reg_lambda * np.eye(xa.shape[1])
        return np.linalg.solve(gram, xa.T @ y)
    return np.linalg.lstsq(xa, y, rcond=None)[0]


def predict_score(h: Hypothesis, x) -> float | np.ndarray:
    """Raw score <w, x> (+ bias); sign(score) is the predicted class."""
    xv = np.asarray(x, dtype=np.float64)
    single = xv.ndim == 1
    xm = xv[None, :] if single else xv
    if xm.ndim != 2:
        raise ShapeError(f"expected a vector or matrix of inputs, got shape {xv.shape}")
    expected = xm.shape[1] + 1 if h.fit_bias else xm.shape[1]
    if h.dim != expected:
        raise ShapeError(
            f"hypothesis of dimension {h.dim} cannot score inputs of dimension {xm.shape[1]}"
        )
    if h.fit_bias:
        scores = xm @ h.weights[:-1] + h.weights[-1]
    else:
        scores = xm @ h.weights
    return float(scores[0]) if single else scores


def regularized_risk(spec: LearnerSpec, h: Hypothesis, data: Dataset) -> float:
    """Summed per-example loss plus (reg_lambda / 2) * ||w||^2."""
    _check_labels(spec, data)
    scores = predict_score(h, data.x)
    penalty = 0.5 * spec.reg_lambda * float(h.weights @ h.weights)
    return float(loss_values(spec.loss, scores, data.y).sum()) + penalty


def empirical_regret(
    h: Hypothesis, spec: LearnerSpec, holdout: Dataset, reference: Hypothesis
) -> float:
    """Mean hold-out loss of ``h`` minus that of ``reference``.

    A hold-out stand-in for the expected-loss gap to the best hypothesis;
    can come out negative through finite-sample noise.
    """
    _check_labels(spec, holdout)
    loss_h = loss_values(spec.loss, predict_score(h, holdout.x), holdout.y).mean()
    loss_ref = loss_values(spec.loss, predict_score(reference, holdout.x), holdout.y).mean()
    return float(loss_h - loss_ref)
