"""Random variate generators with tested moment contracts.

Polya-Gamma PG(1, c), truncated normals, inverse gammas, and multivariate
normals parameterized by their precision.  The PG sampler has a compiled
backend (built at install time) and a pure-Python fallback; the active one is
chosen at import and reported in :data:`PG_BACKEND`.  Both implement the same
exact algorithm and consume the same variate stream, so they are
interchangeable draw for draw.
"""

import math
import os

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InvalidArgumentError, NumericalError

if os.environ.get("PANELSPEC_PG_BACKEND", "").lower() in ("python", "fallback"):
    from . import _pg_python as _pg
    PG_BACKEND = "python"
else:
    try:
        from . import _pg_cython as _pg
        PG_BACKEND = "compiled"
    except ImportError:
        from . import _pg_python as _pg
        PG_BACKEND = "python"


def sample_polya_gamma_1(c: float, rng: np.random.Generator) -> float:
    """Exact draw from the Polya-Gamma distribution PG(1, c)."""
    if not math.isfinite(c):
        raise InvalidArgumentError(f"PG tilt must be finite, got {c}")
    return float(_pg.sample_pg1(float(c), rng))


def sample_polya_gamma_1_array(c, rng: np.random.Generator) -> np.ndarray:
    """Independent PG(1, c_i) draws, one per entry of c."""
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise InvalidArgumentError("PG tilts must be finite")
    return _pg.sample_pg1_array(c, rng)


def polya_gamma_mean(c: float) -> float:
    """E[PG(1, c)] = tanh(c/2) / (2 c), with the c -> 0 limit 1/4."""
    if abs(c) < 1e-8:
        return 0.25 - c * c / 48.0
    return math.tanh(c / 2.0) / (2.0 * c)


def sample_truncated_normal(mean: float, var: float, lo: float, hi: float,
                            rng: np.random.Generator) -> float:
    """Draw from N(mean, var) restricted to (lo, hi).

    Rejection sampling with three regimes: plain normal rejection when the
    interval straddles the mode, a uniform envelope for narrow intervals, and
    an exponential envelope for far-tail intervals.
    """
    if not (lo < hi):
        raise InvalidArgumentError(f"need lo < hi, got ({lo}, {hi})")
    if not (var > 0 and math.isfinite(var)):
        raise InvalidArgumentError(f"variance must be positive and finite, got {var}")
    sd = math.sqrt(var)
    a = (lo - mean) / sd
    b = (hi - mean) / sd
    # work on the side where a >= -b so the lower bound is the hard one
    flip = False
    if abs(a) > abs(b):
        a, b = -b, -a
        flip = True
    z = _truncated_std_normal(a, b, rng)
    if flip:
        z = -z
    return mean + sd * z


def _truncated_std_normal(a, b, rng):
    if b - a < 0.2:
        return _uniform_reject(a, b, rng)
    if a <= 0.0:
        # interval contains the mode (possibly just its right edge)
        while True:
            z = rng.standard_normal()
            if a <= z <= b:
                return z
    if a <= 0.5 and b - a > 1.0:
        # near-mode one-sided interval: plain rejection is still cheap
        while True:
            z = rng.standard_normal()
            if a <= z <= b:
                return z
    return _tail_exponential(a, b, rng)


def _uniform_reject(a, b, rng):
    # envelope: density maximized at the point of [a, b] closest to zero
    m = min(max(0.0, a), b)
    while True:
        z = a + (b - a) * rng.random()
        if math.log(rng.random()) <= 0.5 * (m * m - z * z):
            return z


def _tail_exponential(a, b, rng):
    # Robert (1995) optimal exponential proposal anchored at a > 0
    alpha = 0.5 * (a + math.sqrt(a * a + 4.0))
    while True:
        z = a + rng.standard_exponential() / alpha
        if z > b:
            continue
        u = rng.random()
        if math.log(u) <= -0.5 * (z - alpha) ** 2:
            return z


def sample_inverse_gamma(shape, scale, rng: np.random.Generator):
    """Draw X with density proportional to x^(-shape-1) exp(-scale/x).

    Accepts scalars or arrays (broadcast elementwise).
    """
    shape_arr = np.asarray(shape, dtype=float)
    scale_arr = np.asarray(scale, dtype=float)
    if np.any(shape_arr <= 0) or np.any(scale_arr <= 0):
        raise InvalidArgumentError("inverse-gamma shape and scale must be positive")
    draw = scale_arr / rng.gamma(shape_arr, 1.0)
    if np.isscalar(shape) and np.isscalar(scale):
        return float(draw)
    return draw


def sample_mvn_precision(mean: np.ndarray, precision: np.ndarray,
                         rng: np.random.Generator) -> np.ndarray:
    """Draw from N(mean, precision^{-1}) via a Cholesky factor of the precision."""
    mean = np.asarray(mean, dtype=float)
    precision = np.asarray(precision, dtype=float)
    if mean.shape[0] == 0:
        return np.empty(0)
    try:
        lower = np.linalg.cholesky(precision)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"precision matrix is not positive definite: {exc}") from exc
    z = rng.standard_normal(mean.shape[0])
    return mean + solve_triangular(lower.T, z, lower=False)


def mvn_precision_logpdf(x: np.ndarray, mean: np.ndarray,
                         chol_precision: np.ndarray) -> float:
    """log N(x; mean, P^{-1}) given a lower Cholesky factor of P."""
    resid = np.asarray(x, dtype=float) - np.asarray(mean, dtype=float)
    d = resid.shape[0]
    half_logdet = float(np.sum(np.log(np.diag(chol_precision))))
    quad = float(np.sum((chol_precision.T @ resid) ** 2))
    return half_logdet - 0.5 * d * np.log(2.0 * np.pi) - 0.5 * quad
