"""Piecewise-stationary segment models and their pooled sufficient statistics.

A mixture component is a segmentation of 1..n into contiguous blocks, each
with its own mean, cosine-spline log spectrum, and smoothing variance.  All
series assigned to the component share the same segmentation, so the
frequency-domain likelihood of a segment depends on the assigned series only
through pooled statistics: the summed half-spectrum periodogram, the number
of series, and the first two moments of the per-series segment means.
:class:`SegmentData` carries exactly those.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError
from .spectral import (
    LOG_2PI,
    SplineSpectrum,
    clamped_exp_neg,
    fold_weights,
    half_spectrum_size,
    periodogram_half_matrix,
    spline_basis_half,
)

_LOG_FLOOR = math.log(1e-12)
_LOG_CEIL = 700.0


@dataclass
class ComponentPriorConfig:
    """Hyperparameters of one mixture component.

    Defaults follow the reference simulation setup; all are exposed through
    the run configuration.
    """

    m_max: int = 4
    t_min: int = 40
    n_basis: int = 25
    mu_lo: float = -10.0
    mu_hi: float = 10.0
    sigma2_alpha: float = 100.0
    tau_prior_shape: float = 5e-4
    tau_prior_scale: float = 5e-4

    def __post_init__(self):
        if self.m_max < 1:
            raise InvalidArgumentError("m_max must be at least 1")
        if self.t_min < 2:
            raise InvalidArgumentError("t_min must be at least 2")
        if self.n_basis < 1:
            raise InvalidArgumentError("need at least one spline basis function")
        if not self.mu_lo < self.mu_hi:
            raise InvalidArgumentError("mean prior support is empty")
        if self.sigma2_alpha <= 0 or self.tau_prior_shape <= 0 or self.tau_prior_scale <= 0:
            raise InvalidArgumentError("variance hyperparameters must be positive")

    def validate_for_length(self, n: int):
        if self.m_max * self.t_min > n:
            raise InvalidArgumentError(
                f"m_max * t_min = {self.m_max * self.t_min} exceeds the series length {n}")

    def prior_precision_diag(self, tau2_b: float) -> np.ndarray:
        out = np.full(self.n_basis + 1, 1.0 / tau2_b)
        out[0] = 1.0 / self.sigma2_alpha
        return out


@dataclass
class SegmentModel:
    """Segment count, cutpoints, and per-segment parameters of one component.

    ``cutpoints`` holds the (1-based) end index of each segment; the last
    entry equals the series length.
    """

    cutpoints: np.ndarray
    mu: np.ndarray
    spectra: list

    def __post_init__(self):
        self.cutpoints = np.asarray(self.cutpoints, dtype=int)
        self.mu = np.asarray(self.mu, dtype=float)

    @property
    def m(self) -> int:
        return self.cutpoints.shape[0]

    @property
    def n(self) -> int:
        return int(self.cutpoints[-1])

    def bounds(self):
        """(start, end) pairs, 0-based half-open."""
        starts = np.concatenate(([0], self.cutpoints[:-1]))
        return list(zip(starts.tolist(), self.cutpoints.tolist()))

    def segment_lengths(self) -> np.ndarray:
        return np.diff(np.concatenate(([0], self.cutpoints)))

    def validate(self, n: int, config: ComponentPriorConfig):
        if self.m < 1 or self.m > config.m_max:
            raise InvalidArgumentError(f"segment count {self.m} outside 1..{config.m_max}")
        if self.cutpoints[-1] != n:
            raise InvalidArgumentError("last cutpoint must equal the series length")
        lengths = self.segment_lengths()
        if np.any(lengths < config.t_min):
            raise InvalidArgumentError(f"segment shorter than t_min={config.t_min}")
        if len(self.spectra) != self.m or self.mu.shape[0] != self.m:
            raise InvalidArgumentError("per-segment parameter counts do not match m")
        if np.any(self.mu <= config.mu_lo) or np.any(self.mu >= config.mu_hi):
            raise InvalidArgumentError("segment mean outside its prior support")

    def copy(self) -> "SegmentModel":
        return SegmentModel(
            self.cutpoints.copy(), self.mu.copy(),
            [SplineSpectrum(s.coefficients.copy(), s.tau2_b) for s in self.spectra])


class SegmentData:
    """Pooled frequency-domain statistics of one segment across series."""

    __slots__ = ("n_seg", "count", "sum_mean", "sum_sq_mean", "pgram",
                 "basis", "weights", "wbasis", "const")

    def __init__(self, n_seg, count, sum_mean, sum_sq_mean, pgram, n_basis):
        self.n_seg = int(n_seg)
        self.count = int(count)
        self.sum_mean = float(sum_mean)
        self.sum_sq_mean = float(sum_sq_mean)
        self.pgram = pgram                       # pooled, entry 0 zeroed
        self.basis = spline_basis_half(self.n_seg, n_basis)
        self.weights = fold_weights(self.n_seg)
        self.wbasis = self.weights @ self.basis  # row sums for the gradient
        self.const = -0.5 * self.count * self.n_seg * LOG_2PI

    @property
    def mean_of_means(self) -> float:
        return self.sum_mean / self.count

    def pooled_pgram_zero(self, mu: float) -> float:
        """Pooled periodogram at frequency zero, which depends on the mean."""
        return self.n_seg * (self.sum_sq_mean - 2.0 * mu * self.sum_mean
                             + self.count * mu * mu)


def segment_data(X: np.ndarray, start: int, end: int, n_basis: int) -> SegmentData:
    """Build pooled statistics for the block ``[start, end)`` of the rows of X."""
    block = X[:, start:end]
    count, n_seg = block.shape
    if n_seg < 2:
        raise InvalidArgumentError("segments must contain at least 2 observations")
    pgram = periodogram_half_matrix(block).sum(axis=0)
    pgram[0] = 0.0
    means = block.mean(axis=1)
    return SegmentData(n_seg, count, means.sum(), float(np.sum(means ** 2)),
                       pgram, n_basis)


class ComponentData:
    """The series currently assigned to a component, with a segment cache."""

    def __init__(self, X: np.ndarray, n_basis: int):
        self.X = np.atleast_2d(np.asarray(X, dtype=float))
        self.n_basis = n_basis
        self.count, self.n = self.X.shape
        self._cache = {}

    def segment(self, start: int, end: int) -> SegmentData:
        key = (int(start), int(end))
        hit = self._cache.get(key)
        if hit is None:
            hit = segment_data(self.X, key[0], key[1], self.n_basis)
            self._cache[key] = hit
        return hit

    def model_log_likelihood(self, model: SegmentModel) -> float:
        return sum(
            segment_log_likelihood(self.segment(a, b), model.mu[s],
                                   model.spectra[s].coefficients)
            for s, (a, b) in enumerate(model.bounds()))


def segment_log_likelihood(sd: SegmentData, mu: float, coefs: np.ndarray) -> float:
    """Exact pooled Whittle log likelihood of one segment."""
    lf = np.clip(sd.basis @ coefs, _LOG_FLOOR, _LOG_CEIL)
    inv_f = np.exp(-lf)
    quad = (sd.weights * sd.pgram) @ inv_f + sd.pooled_pgram_zero(mu) * inv_f[0]
    return float(sd.const - 0.5 * sd.count * (sd.weights @ lf) - 0.5 * quad)


def b_value_grad_hess(sd: SegmentData, mu: float, coefs: np.ndarray,
                      prior_prec: np.ndarray, want_hessian: bool = True):
    """Log conditional of the spline coefficients, with derivatives.

    Value is the pooled Whittle log likelihood plus the Gaussian log prior,
    both up to additive constants.  The spectrum floor enters the value; the
    gradient uses the floored spectrum as well, so Metropolis corrections stay
    exact even when the floor is active.
    """
    lf = np.clip(sd.basis @ coefs, _LOG_FLOOR, _LOG_CEIL)
    inv_f = np.exp(-lf)
    pgram_full = sd.weights * sd.pgram
    pg0 = sd.pooled_pgram_zero(mu)
    wi = pgram_full * inv_f
    wi[0] += pg0 * inv_f[0]
    value = (-0.5 * sd.count * (sd.weights @ lf) - 0.5 * wi.sum()
             - 0.5 * float(prior_prec @ (coefs * coefs)))
    grad = 0.5 * (sd.basis.T @ wi - sd.count * sd.wbasis) - prior_prec * coefs
    if not want_hessian:
        return value, grad, None
    hess = -0.5 * (sd.basis.T * wi) @ sd.basis - np.diag(prior_prec)
    return value, grad, hess


def mu_conditional(sd: SegmentData, log_f_zero: float):
    """Mean and variance of the segment-mean conditional (before truncation)."""
    var = math.exp(min(max(log_f_zero, _LOG_FLOOR), _LOG_CEIL)) / (sd.n_seg * sd.count)
    return sd.mean_of_means, var


def gaussian_log_prior(coefs: np.ndarray, config: ComponentPriorConfig,
                       tau2_b: float) -> float:
    """Exact log density of the spline-coefficient prior."""
    prec = config.prior_precision_diag(tau2_b)
    quad = float(prec @ (coefs * coefs))
    logdet = float(np.sum(np.log(prec)))
    return 0.5 * (logdet - coefs.shape[0] * LOG_2PI - quad)


def inverse_gamma_log_prior(tau2: float, config: ComponentPriorConfig) -> float:
    a, b = config.tau_prior_shape, config.tau_prior_scale
    return a * math.log(b) - math.lgamma(a) - (a + 1.0) * math.log(tau2) - b / tau2


@lru_cache(maxsize=None)
def count_segment_layouts(n: int, m: int, t_min: int) -> int:
    """Number of admissible cutpoint configurations with m segments."""
    free = n - m * t_min
    if free < 0:
        return 0
    return math.comb(free + m - 1, m - 1)


def sample_cutpoints(n: int, m: int, t_min: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw over admissible cutpoint configurations."""
    if count_segment_layouts(n, m, t_min) < 1:
        raise InvalidArgumentError(f"no admissible segmentation for n={n}, m={m}, t_min={t_min}")
    if m == 1:
        return np.array([n])
    free = n - m * t_min
    # stars and bars: a uniform (m-1)-subset of {1, ..., free + m - 1}
    marks = np.sort(rng.choice(free + m - 1, size=m - 1, replace=False) + 1)
    padded = np.concatenate(([0], marks, [free + m]))
    lengths = np.diff(padded) - 1 + t_min
    return np.cumsum(lengths)


def sample_spline_prior(config: ComponentPriorConfig, tau2_b: float,
                        rng: np.random.Generator) -> SplineSpectrum:
    coefs = rng.standard_normal(config.n_basis + 1)
    coefs[0] *= math.sqrt(config.sigma2_alpha)
    coefs[1:] *= math.sqrt(tau2_b)
    return SplineSpectrum(coefs, tau2_b)


def sample_segment_model_prior(n: int, config: ComponentPriorConfig,
                               rng: np.random.Generator) -> SegmentModel:
    """Independent draw of a full segment model from its prior."""
    from .distributions import sample_inverse_gamma

    m_cap = min(config.m_max, n // config.t_min)
    m = int(rng.integers(1, m_cap + 1))
    cutpoints = sample_cutpoints(n, m, config.t_min, rng)
    mu = rng.uniform(config.mu_lo, config.mu_hi, size=m)
    spectra = []
    for _ in range(m):
        tau2 = sample_inverse_gamma(config.tau_prior_shape, config.tau_prior_scale, rng)
        spectra.append(sample_spline_prior(config, tau2, rng))
    return SegmentModel(cutpoints, mu, spectra)
