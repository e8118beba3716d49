"""Deterministic spectral kernels.

Frequency-domain building blocks for the piecewise-stationary Gaussian model:
Fourier frequencies, periodograms, the cosine spline parameterization of the
log spectral density, the frequency-domain Gaussian log likelihood, the
circulant precision matrix it implies, and exact conditionals for missing
values.

Conventions
-----------
Frequencies are stored 0-based: entry ``k`` holds the value at frequency
``k / n`` for ``k = 0, ..., n - 1``.  The log spectrum is even, so only the
first ``n // 2 + 1`` frequencies are distinct; helpers that exploit this
"half spectrum" carry fold weights (1 for self-paired frequencies, 2 for the
rest) so full-grid sums can be recovered exactly.  Segment lengths may be odd
even though whole series must have even length; the half-spectrum machinery
covers both cases.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import InvalidArgumentError, NumericalError

# Spectral densities are floored at this value before any division, so deep
# troughs proposed early in an MCMC run cannot overflow 1/f.
SPECTRUM_FLOOR = 1e-12
_LOG_FLOOR = np.log(SPECTRUM_FLOOR)
# Overflow guard for exp(); never active for finite posterior states.
_LOG_CEIL = 700.0

LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class TimeSeries:
    """One series with an explicit missing-value mask (True = missing)."""

    values: np.ndarray
    missing_mask: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.missing_mask is None:
            self.missing_mask = np.zeros(self.values.shape, dtype=bool)
        self.missing_mask = np.asarray(self.missing_mask, dtype=bool)
        n = self.values.shape[0]
        if self.values.ndim != 1 or self.missing_mask.shape != (n,):
            raise InvalidArgumentError("values and missing_mask must be 1-D and equal length")
        if n < 2 or n % 2 != 0:
            raise InvalidArgumentError(f"series length must be even and >= 2, got {n}")
        observed = self.values[~self.missing_mask]
        if not np.all(np.isfinite(observed)):
            raise InvalidArgumentError("non-missing values must be finite")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def n_missing(self) -> int:
        return int(self.missing_mask.sum())


@dataclass
class SplineSpectrum:
    """Log spectral density parameterized by cosine spline coefficients.

    ``coefficients`` is the vector ``(intercept, c_1, ..., c_J)``; the log
    spectrum at frequency ``w`` is the intercept plus
    ``sum_j c_j * sqrt(2) cos(2 pi j w) / (j pi)``.  ``tau2_b`` is the
    smoothing variance of the non-intercept coefficients.
    """

    coefficients: np.ndarray
    tau2_b: float

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.ndim != 1 or self.coefficients.shape[0] < 2:
            raise InvalidArgumentError("need an intercept plus at least one spline coefficient")
        if not np.all(np.isfinite(self.coefficients)):
            raise InvalidArgumentError("spline coefficients must be finite")
        if not (np.isfinite(self.tau2_b) and self.tau2_b > 0):
            raise InvalidArgumentError(f"tau2_b must be positive, got {self.tau2_b}")

    @property
    def n_basis(self) -> int:
        """Number of non-intercept basis functions."""
        return self.coefficients.shape[0] - 1


@dataclass
class CirculantPrecision:
    """Symmetric circulant precision matrix stored as its first column."""

    lam: np.ndarray

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float)
        n = self.lam.shape[0]
        if not np.all(np.isfinite(self.lam)):
            raise InvalidArgumentError("circulant coefficients must be finite")
        if n > 1 and not np.allclose(self.lam[1:], self.lam[:0:-1],
                                     rtol=1e-8, atol=1e-10):
            raise InvalidArgumentError("circulant coefficients are not symmetric")

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    def dense(self) -> np.ndarray:
        """Materialize the full matrix; intended for small n / testing."""
        idx = np.arange(self.n)
        return self.lam[(idx[:, None] - idx[None, :]) % self.n]

    def block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=int)
        cols = np.asarray(cols, dtype=int)
        return self.lam[(rows[:, None] - cols[None, :]) % self.n]


def fourier_frequencies(n: int) -> np.ndarray:
    """Frequencies ``k / n`` for ``k = 0, ..., n - 1``; n must be even."""
    if n < 2 or n % 2 != 0:
        raise InvalidArgumentError(f"n must be even and >= 2, got {n}")
    return np.arange(n) / n


def half_spectrum_size(n: int) -> int:
    """Number of distinct frequencies of an even log spectrum on the n-grid."""
    return n // 2 + 1 if n % 2 == 0 else (n + 1) // 2


def fold_weights(n: int) -> np.ndarray:
    """Multiplicities mapping half-spectrum sums to full-grid sums.

    Frequency 0 is always self-paired; the Nyquist frequency exists (and is
    self-paired) only for even n.
    """
    size = half_spectrum_size(n)
    w = np.full(size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    return w


@lru_cache(maxsize=4096)
def _basis_half_cached(n: int, n_basis: int) -> np.ndarray:
    size = half_spectrum_size(n)
    omega = np.arange(size) / n
    j = np.arange(1, n_basis + 1)
    mat = np.empty((size, n_basis + 1))
    mat[:, 0] = 1.0
    mat[:, 1:] = np.sqrt(2.0) * np.cos(2.0 * np.pi * omega[:, None] * j[None, :]) / (j[None, :] * np.pi)
    mat.setflags(write=False)
    return mat


def spline_basis_half(n: int, n_basis: int) -> np.ndarray:
    """Basis rows at the distinct frequencies; shape (half_size, n_basis + 1)."""
    if n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    if n_basis < 1:
        raise InvalidArgumentError("need at least one spline basis function")
    return _basis_half_cached(int(n), int(n_basis))


def spline_basis(n: int, n_basis: int) -> np.ndarray:
    """Basis rows at all n frequencies, using evenness for the upper half."""
    half = spline_basis_half(n, n_basis)
    return half[_mirror_index(n)]


@lru_cache(maxsize=4096)
def _mirror_index(n: int) -> np.ndarray:
    # index k in 0..n-1 maps to min(k, n - k) in the half spectrum
    k = np.arange(n)
    idx = np.minimum(k, n - k)
    idx.setflags(write=False)
    return idx


def log_spectral_density(spectrum: SplineSpectrum, n: int) -> np.ndarray:
    """Evaluate the log spectral density at all n Fourier frequencies."""
    half = spline_basis_half(n, spectrum.n_basis) @ spectrum.coefficients
    return half[_mirror_index(n)]


def log_spectral_density_at(spectrum: SplineSpectrum, freqs: np.ndarray) -> np.ndarray:
    """Evaluate the log spectral density on an arbitrary frequency grid."""
    freqs = np.asarray(freqs, dtype=float)
    j = np.arange(1, spectrum.n_basis + 1)
    basis = np.sqrt(2.0) * np.cos(2.0 * np.pi * freqs[:, None] * j[None, :]) / (j[None, :] * np.pi)
    return spectrum.coefficients[0] + basis @ spectrum.coefficients[1:]


def clamped_exp_neg(log_f: np.ndarray) -> np.ndarray:
    """exp(-log_f) with the spectrum floored at SPECTRUM_FLOOR."""
    return np.exp(-np.clip(log_f, _LOG_FLOOR, _LOG_CEIL))


def clamped_exp(log_f: np.ndarray) -> np.ndarray:
    """exp(log_f) with the same floor applied."""
    return np.exp(np.clip(log_f, _LOG_FLOOR, _LOG_CEIL))


def _require_complete(x: TimeSeries):
    if x.n_missing:
        raise InvalidArgumentError("operation requires a series with no missing values")


def periodogram(x: TimeSeries, mu: float) -> np.ndarray:
    """Periodogram |d_k|^2 of the centered series at all n frequencies.

    d_k is the unitary DFT of ``x - mu``: ``n**-0.5 * sum_t (x_t - mu)
    exp(-2 pi i (k/n) (t-1))``.  Computed with an FFT.
    """
    _require_complete(x)
    d = np.fft.fft(x.values - mu) / np.sqrt(x.n)
    return np.abs(d) ** 2


def periodogram_half_matrix(X: np.ndarray) -> np.ndarray:
    """Half-spectrum periodograms of the rows of X, taken about mean zero.

    Entry 0 (frequency zero) is returned as computed from the raw rows; most
    callers overwrite it because it depends on the segment mean.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[1]
    d = np.fft.rfft(X, axis=1) / np.sqrt(n)
    pg = np.abs(d) ** 2
    return pg[:, : half_spectrum_size(n)]


def whittle_log_likelihood(x: TimeSeries, mu: float, log_f: np.ndarray) -> float:
    """Frequency-domain Gaussian log likelihood of a complete series.

    Equals ``-(n/2) log 2pi - 0.5 sum_k log f(w_k) - 0.5 sum_k I_k / f(w_k)``
    over all n Fourier frequencies, with f floored at SPECTRUM_FLOOR.
    """
    _require_complete(x)
    log_f = np.asarray(log_f, dtype=float)
    if log_f.shape != (x.n,):
        raise InvalidArgumentError("log_f length must match the series length")
    if not np.all(np.isfinite(log_f)):
        raise InvalidArgumentError("log_f must be finite")
    pg = periodogram(x, mu)
    lf = np.clip(log_f, _LOG_FLOOR, _LOG_CEIL)
    return float(-0.5 * x.n * LOG_2PI - 0.5 * np.sum(lf) - 0.5 * np.sum(pg * np.exp(-lf)))


def segmented_log_likelihood(x: TimeSeries, model) -> float:
    """Sum of per-segment Whittle log likelihoods under a segment model.

    ``model`` must expose ``cutpoints`` (segment end indices, last equal to
    n), ``mu`` and ``spectra``; each segment is treated as an independent
    stationary block with its own length acting as the DFT size.
    """
    _require_complete(x)
    total = 0.0
    start = 0
    for mu_s, spec_s, end in zip(model.mu, model.spectra, model.cutpoints):
        end = int(end)
        if end - start < 2:
            raise InvalidArgumentError("segments must contain at least 2 observations")
        seg = x.values[start:end]
        total += _whittle_raw(seg, mu_s, spec_s)
        start = end
    if start != x.n:
        raise InvalidArgumentError("cutpoints do not partition the series")
    return total


def _whittle_raw(values: np.ndarray, mu: float, spectrum: SplineSpectrum) -> float:
    n = values.shape[0]
    size = half_spectrum_size(n)
    w = fold_weights(n)
    lf = spline_basis_half(n, spectrum.n_basis) @ spectrum.coefficients
    pg = periodogram_half_matrix(values[None, :])[0]
    xbar = float(values.mean())
    pg0 = n * (xbar - mu) ** 2
    inv_f = clamped_exp_neg(lf)
    quad = w @ (pg * inv_f) - pg[0] * inv_f[0] + pg0 * inv_f[0]
    return float(-0.5 * n * LOG_2PI - 0.5 * (w @ np.clip(lf, _LOG_FLOOR, _LOG_CEIL)) - 0.5 * quad)


def circulant_precision(log_f: np.ndarray) -> CirculantPrecision:
    """Precision matrix implied by the Whittle model, as a circulant.

    The first column is ``lam_t = (1/n) sum_k exp(-log f(w_k))
    exp(-2 pi i t w_k)``; evenness of f makes it real.  Computed with one FFT
    of the reciprocal spectrum.
    """
    log_f = np.asarray(log_f, dtype=float)
    n = log_f.shape[0]
    if not np.all(np.isfinite(log_f)):
        raise InvalidArgumentError("log_f must be finite")
    if n > 1 and not np.allclose(log_f[1:], log_f[:0:-1], rtol=1e-8, atol=1e-10):
        raise InvalidArgumentError("log_f must be symmetric: f(w_k) = f(w_{n-k})")
    r = clamped_exp_neg(log_f)
    lam = np.fft.fft(r) / n
    return CirculantPrecision(lam.real)


def missing_conditional(x: TimeSeries, mu: float, log_f: np.ndarray):
    """Conditional distribution of the missing values given the observed.

    Returns ``(mean, precision)`` where ``mean`` has one entry per missing
    index (in increasing index order) and ``precision`` is the corresponding
    block of the circulant precision matrix.  With no missing values both
    outputs are empty; with nothing observed the unconditional distribution
    ``N(mu * 1, Lambda^{-1})`` is returned.
    """
    lam = circulant_precision(log_f)
    mis = np.flatnonzero(x.missing_mask)
    obs = np.flatnonzero(~x.missing_mask)
    if mis.size == 0:
        return np.empty(0), np.empty((0, 0))
    if obs.size == 0:
        return np.full(x.n, float(mu)), lam.dense()
    lam_mm = lam.block(mis, mis)
    lam_mo = lam.block(mis, obs)
    resid = x.values[obs] - mu
    try:
        factor = cho_factor(lam_mm, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"missing-value precision block is not positive definite: {exc}") from exc
    mean = mu - cho_solve(factor, lam_mo @ resid)
    return mean, lam_mm


def sample_stationary_gaussian(n: int, mu: float, log_f: np.ndarray,
                               rng: np.random.Generator) -> np.ndarray:
    """Exact draw from the n-point stationary Gaussian with spectrum f.

    Uses the spectral factorization of the circulant covariance: independent
    complex-normal Fourier coefficients with variances f(w_k), symmetrized and
    transformed back.
    """
    f = clamped_exp(np.asarray(log_f, dtype=float))
    if f.shape != (n,):
        raise InvalidArgumentError("log_f length must equal n")
    d = np.zeros(n, dtype=complex)
    d[0] = np.sqrt(f[0]) * rng.standard_normal()
    if n % 2 == 0:
        half = n // 2
        if half > 1:
            z = rng.standard_normal((half - 1, 2))
            d[1:half] = np.sqrt(f[1:half] / 2.0) * (z[:, 0] + 1j * z[:, 1])
            d[half + 1:] = np.conj(d[1:half][::-1])
        d[half] = np.sqrt(f[half]) * rng.standard_normal()
    else:
        half = (n + 1) // 2
        z = rng.standard_normal((half - 1, 2))
        d[1:half] = np.sqrt(f[1:half] / 2.0) * (z[:, 0] + 1j * z[:, 1])
        d[half:] = np.conj(d[1:half][::-1])
    return mu + np.sqrt(n) * np.fft.ifft(d).real


def sample_missing(x: TimeSeries, model, rng: np.random.Generator) -> TimeSeries:
    """Impute missing values segment by segment under a segment model.

    Observed entries are returned unchanged; each segment's missing block is
    drawn from its exact Gaussian conditional.  The missing mask is preserved
    so the imputation can be repeated.
    """
    if x.n_missing == 0:
        return x
    from .distributions import sample_mvn_precision  # local import avoids a cycle

    values = x.values.copy()
    start = 0
    for mu_s, spec_s, end in zip(model.mu, model.spectra, model.cutpoints):
        end = int(end)
        mask_seg = x.missing_mask[start:end]
        if mask_seg.any():
            n_seg = end - start
            log_f = log_spectral_density(spec_s, n_seg)
            if mask_seg.all():
                values[start:end] = sample_stationary_gaussian(n_seg, mu_s, log_f, rng)
            else:
                mean, lam_mm = _missing_conditional_raw(
                    x.values[start:end], mask_seg, mu_s, log_f)
                draw = sample_mvn_precision(mean, lam_mm, rng)
                values[start:end][mask_seg] = draw
        start = end
    return TimeSeries(values, x.missing_mask.copy())


def _missing_conditional_raw(values: np.ndarray, missing: np.ndarray,
                             mu: float, log_f: np.ndarray):
    """missing_conditional on raw arrays (no even-length requirement)."""
    lam = circulant_precision(log_f)
    mis = np.flatnonzero(missing)
    obs = np.flatnonzero(~missing)
    lam_mm = lam.block(mis, mis)
    lam_mo = lam.block(mis, obs)
    try:
        factor = cho_factor(lam_mm, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"missing-value precision block is not positive definite: {exc}") from exc
    mean = mu - cho_solve(factor, lam_mo @ (values[obs] - mu))
    return mean, lam_mm
