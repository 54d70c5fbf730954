"""Closed-form calculators for the guarantees of Radon-point aggregation.

Aggregating r independent hypotheses through one Radon point squares the
failure probability (up to the union-bound factor r), so a tree of height h
turns a per-learner failure bound delta_base into

    delta = (r * delta_base) ** (2 ** h),

which is meaningful whenever r * delta_base < 1 and shrinks doubly
exponentially in h as long as delta_base <= 1 / (2r).  The remaining
calculators convert between sample sizes, pick tree heights, and estimate
runtime, speed-up, and data cost of the scheme against running the base
learner on enough data for the same guarantee.  Asymptotic-order estimates
evaluate their formulas with all hidden constants set to 1 and are
order-of-magnitude indicators, not exact predictions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ConfigError


def _as_float(value) -> float:
    """float() that saturates to +inf instead of raising on huge ints."""
    try:
        return float(value)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class ComplexityParams:
    """Base-learner complexity model.

    Sample complexity (alpha_eps + beta_eps * log2(1 / delta)) ** k examples
    for an (eps, delta)-guarantee, and runtime growing as n ** kappa.
    """

    alpha_eps: float
    beta_eps: float
    k: int
    kappa: int

    def __post_init__(self):
        if not (math.isfinite(self.alpha_eps) and self.alpha_eps >= 0):
            raise ConfigError("alpha_eps must be finite and >= 0")
        if not (math.isfinite(self.beta_eps) and self.beta_eps >= 0):
            raise ConfigError("beta_eps must be finite and >= 0")
        if self.k < 1 or self.kappa < 1:
            raise ConfigError("k and kappa must be >= 1")

    def base_sample_size(self, delta: float) -> float:
        if not 0.0 < delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {delta}")
        return (self.alpha_eps + self.beta_eps * math.log2(1.0 / delta)) ** self.k


@dataclass(frozen=True)
class BoostedConfidence:
    """Failure bound after h aggregation rounds, kept in log space too."""

    delta: float
    log2_delta: float
    vacuous: bool


@dataclass
class BoundReport:
    """All closed-form quantities for one (params, r, delta_base, h) choice."""

    r: int
    h: int
    delta_base: float
    delta: float
    log2_delta: float
    n_base: float
    n_radon: float
    m_sequential: float
    m_sequential_approx: float
    h_star: int | None
    runtime_radon_model: float
    runtime_sequential_model: float
    speedup_estimate: float
    inefficiency_estimate: float
    data_inefficiency: float
    guarantee_valid: bool

    def to_dict(self) -> dict:
        return asdict(self)


def boosted_confidence(r: int, delta_base: float, h: int) -> BoostedConfidence:
    """(r * delta_base) ** (2 ** h), evaluated in log space.

    The ``vacuous`` flag is set when r * delta_base >= 1, in which case the
    bound is still computed but guarantees nothing.
    """
    if r < 3:
        raise ConfigError(f"Radon number must be >= 3, got {r}")
    if not 0.0 < delta_base < 1.0:
        raise ConfigError(f"delta_base must lie in (0, 1), got {delta_base}")
    if h < 0:
        raise ConfigError(f"height must be >= 0, got {h}")
    vacuous = r * delta_base >= 1.0
    log2_delta = _as_float(2**h) * math.log2(r * delta_base)
    if log2_delta < -1080.0:
        delta = 0.0
    elif log2_delta > 1023.0:
        delta = math.inf
    else:
        delta = 2.0**log2_delta
    return BoostedConfidence(delta=delta, log2_delta=log2_delta, vacuous=vacuous)


def sample_complexity_vc(eps: float, delta: float, proof_form: bool = False) -> float:
    """Sample size for learners over classes of finite VC dimension.

    Default constants: alpha = 4 ln 2 / eps^2, beta = 4 / (eps^2 log2 e),
    k = 2.  ``proof_form`` switches to the alternative linear bound
    (ln 2 + 4 log2(1/delta) / log2 e) / eps^2 derived from the same
    concentration step.
    """
    if not 0.0 < eps < 1.0:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < delta <= 1.0:
        raise ConfigError(f"delta must lie in (0, 1], got {delta}")
    inv_eps_sq = 1.0 / (eps * eps)
    log_term = math.log2(1.0 / delta)
    if proof_form:
        return inv_eps_sq * (math.log(2.0) + 4.0 * log_term / math.log2(math.e))
    alpha = 4.0 * math.log(2.0) * inv_eps_sq
    beta = 4.0 * inv_eps_sq / math.log2(math.e)
    return (alpha + beta * log_term) ** 2


def sample_complexity_rademacher(eps: float, delta: float, rho: float) -> float:
    """Sample size for classes of Rademacher complexity rho:
    log2(1/delta) / (2 (eps - 2 rho)^2); requires eps > 2 rho."""
    if not 0.0 < delta <= 1.0:
        raise ConfigError(f"delta must lie in (0, 1], got {delta}")
    if rho < 0.0:
        raise ConfigError(f"rho must be >= 0, got {rho}")
    if eps <= 2.0 * rho:
        raise ConfigError(f"infeasible eps: need eps > 2 * rho = {2.0 * rho}, got {eps}")
    return math.log2(1.0 / delta) / (2.0 * (eps - 2.0 * rho) ** 2)


def radon_sample_size(r: int, h: int, n_base: float) -> float:
    """Total sample size r^h * n_base of the aggregation scheme."""
    if r < 3 or h < 0 or not n_base > 0:
        raise ConfigError("need r >= 3, h >= 0, n_base > 0")
    replicas = r**h  # exact integer, arbitrary precision
    if float(n_base).is_integer():
        return _as_float(replicas * int(n_base))
    return _as_float(replicas) * float(n_base)


def sequential_sample_size(params: ComplexityParams, r: int, delta_base: float, h: int) -> float:
    """Sample size the base learner alone needs for the boosted guarantee:
    (alpha + 2^h * beta * log2(1 / (r * delta_base))) ** k."""
    if r < 3 or h < 0:
        raise ConfigError("need r >= 3 and h >= 0")
    if not 0.0 < delta_base < 1.0 / r:
        raise ConfigError(f"delta_base must lie in (0, 1/r) = (0, {1.0 / r}), got {delta_base}")
    log_term = math.log2(1.0 / (r * delta_base))
    return (params.alpha_eps + _as_float(2**h) * params.beta_eps * log_term) ** params.k


def choose_height(m_samples: float, k: int) -> int:
    """Tree height ceil((log2 M - log2 log2 M) / k) that makes the
    aggregation runtime polylogarithmic in M."""
    if not m_samples > 2.0:
        raise ConfigError(f"need M > 2, got {m_samples}")
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    ld_m = math.log2(m_samples)
    value = (ld_m - math.log2(ld_m)) / k
    # Snap values within a few ulps of an integer before taking the ceiling.
    nearest = round(value)
    if abs(value - nearest) <= 1e-12 * max(1.0, abs(value)):
        value = nearest
    return max(1, math.ceil(value))


def runtime_model(n: float, r: int, h: int, kappa: int, c_workers: int) -> float:
    """Abstract cost of the scheme on c workers:

    max(1, r^h / c) * n^kappa + r^3 * sum_{i=1..h} ceil(r^i / c).

    With c >= r^h this reduces to n^kappa + h * r^3.
    """
    if not n > 0 or r < 3 or h < 0 or kappa < 1 or c_workers < 1:
        raise ConfigError("need n > 0, r >= 3, h >= 0, kappa >= 1, c_workers >= 1")
    queue_factor = max(1.0, float(r**h) / c_workers)
    aggregation = r**3 * sum(-(-(r**i) // c_workers) for i in range(1, h + 1))
    return queue_factor * float(n) ** kappa + float(aggregation)


def efficiency_report(
    params: ComplexityParams, r: int, delta_base: float, h: int, c_workers: int
) -> BoundReport:
    """Assemble every calculator output for one parameter choice.

    speedup_estimate: 2^(h k kappa) / (1 + h r^3 / n_base^kappa)
    inefficiency_estimate: M ** log2(r)
    data_inefficiency: (M / log2 M) ** (log2(r) / k)

    all with hidden constants 1, where M is the sequential sample size.
    """
    boosted = boosted_confidence(r, delta_base, h)
    n_base = params.base_sample_size(delta_base)
    n_radon = radon_sample_size(r, h, n_base)
    m_seq = sequential_sample_size(params, r, delta_base, h)
    m_approx = _as_float(2**h) * n_base
    h_star = choose_height(m_seq, params.k) if m_seq > 2.0 else None

    runtime_radon = runtime_model(n_base, r, h, params.kappa, c_workers)
    runtime_seq = float(m_seq) ** params.kappa
    speedup = _as_float(2 ** (h * params.k * params.kappa)) / (
        1.0 + h * r**3 / float(n_base) ** params.kappa
    )
    inefficiency = float(m_seq) ** math.log2(r) if m_seq > 0 else math.inf
    ld_m = math.log2(m_seq) if m_seq > 1.0 else math.nan
    data_ineff = (m_seq / ld_m) ** (math.log2(r) / params.k) if m_seq > 1.0 else math.nan

    return BoundReport(
        r=r,
        h=h,
        delta_base=delta_base,
        delta=boosted.delta,
        log2_delta=boosted.log2_delta,
        n_base=n_base,
        n_radon=n_radon,
        m_sequential=m_seq,
        m_sequential_approx=m_approx,
        h_star=h_star,
        runtime_radon_model=runtime_radon,
        runtime_sequential_model=runtime_seq,
        speedup_estimate=speedup,
        inefficiency_estimate=inefficiency,
        data_inefficiency=data_ineff,
        guarantee_valid=0.0 < delta_base <= 1.0 / (2 * r),
    )
