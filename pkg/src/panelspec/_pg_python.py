"""Pure-Python Polya-Gamma PG(1, c) sampler.

Exact alternating-series rejection sampler (Devroye's method for the tilted
Jacobi distribution).  This is the fallback backend; ``_pg_cython`` implements
the same algorithm, consuming the identical variate stream, so the two
backends produce bit-identical draws from the same bit generator.
"""

import math

import numpy as np

_T = 0.64  # series crossover point of the Jacobi density
_HALF_PI_SQ = math.pi * math.pi / 8.0


def _norm_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _inv_gauss_cdf_unit(t, z):
    """CDF at t of an inverse Gaussian with mean 1/z and shape 1 (z >= 0)."""
    rt = math.sqrt(t)
    out = _norm_cdf((z * t - 1.0) / rt)
    x2 = -(z * t + 1.0) / rt
    if x2 > -37.5:
        out += math.exp(2.0 * z) * _norm_cdf(x2)
    return out


def _series_coef(n, x):
    if x <= _T:
        return math.pi * (n + 0.5) * (2.0 / (math.pi * x)) ** 1.5 \
            * math.exp(-2.0 * (n + 0.5) ** 2 / x)
    return math.pi * (n + 0.5) * math.exp(-((n + 0.5) ** 2) * (math.pi ** 2) * x / 2.0)


def _truncated_inv_gauss(z, rng):
    """Draw from inverse Gaussian(mean=1/z, shape=1) restricted to (0, t)."""
    if z * _T < 1.0:
        # mean beyond the truncation point: rejection from the scaled
        # reciprocal-chi-square proposal
        while True:
            while True:
                e1 = rng.standard_exponential()
                e2 = rng.standard_exponential()
                if e1 * e1 <= 2.0 * e2 / _T:
                    break
            x = _T / ((1.0 + _T * e1) * (1.0 + _T * e1))
            if rng.random() <= math.exp(-0.5 * z * z * x):
                return x
    else:
        mu = 1.0 / z
        while True:
            y = rng.standard_normal()
            y *= y
            muy = mu * y
            x = mu + 0.5 * mu * muy - 0.5 * mu * math.sqrt(4.0 * muy + muy * muy)
            if rng.random() > mu / (mu + x):
                x = mu * mu / x
            if x <= _T:
                return x


def sample_pg1(c, rng):
    """One exact draw from PG(1, c)."""
    z = 0.5 * abs(c)
    k = _HALF_PI_SQ + 0.5 * z * z
    p = (math.pi / (2.0 * k)) * math.exp(-k * _T)
    q = 2.0 * math.exp(-z) * _inv_gauss_cdf_unit(_T, z)
    ratio = p / (p + q)
    while True:
        if rng.random() < ratio:
            x = _T + rng.standard_exponential() / k
        else:
            x = _truncated_inv_gauss(z, rng)
        s = _series_coef(0, x)
        y = rng.random() * s
        n = 0
        while True:
            n += 1
            if n & 1:
                s -= _series_coef(n, x)
                if y <= s:
                    return 0.25 * x
            else:
                s += _series_coef(n, x)
                if y > s:
                    break


def sample_pg1_array(c, rng):
    """Independent PG(1, c_i) draws for each entry of c."""
    c = np.asarray(c, dtype=float)
    out = np.empty(c.shape)
    flat_c = c.ravel()
    flat_out = out.ravel()
    for i in range(flat_c.shape[0]):
        flat_out[i] = sample_pg1(flat_c[i], rng)
    return out
