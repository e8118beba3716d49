#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Polya-Gamma PG(1, c) sampler.

Same alternating-series rejection algorithm as ``_pg_python``, drawing its
uniform/normal/exponential variates from the numpy bit generator C API in the
identical order, so both backends give bit-identical output from the same
stream.
"""

from libc.math cimport exp, sqrt, erfc, M_PI

import numpy as np

cimport numpy as cnp
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential,
    random_standard_normal,
    random_standard_uniform,
)
from cpython.pycapsule cimport PyCapsule_GetPointer

cnp.import_array()

cdef double _T = 0.64
cdef double _HALF_PI_SQ = M_PI * M_PI / 8.0
cdef double _SQRT2 = sqrt(2.0)


cdef inline double _norm_cdf(double x) noexcept nogil:
    return 0.5 * erfc(-x / _SQRT2)


cdef inline double _inv_gauss_cdf_unit(double t, double z) noexcept nogil:
    cdef double rt = sqrt(t)
    cdef double out = _norm_cdf((z * t - 1.0) / rt)
    cdef double x2 = -(z * t + 1.0) / rt
    if x2 > -37.5:
        out += exp(2.0 * z) * _norm_cdf(x2)
    return out


cdef inline double _series_coef(long n, double x) noexcept nogil:
    cdef double half = n + 0.5
    if x <= _T:
        return M_PI * half * (2.0 / (M_PI * x)) ** 1.5 * exp(-2.0 * half * half / x)
    return M_PI * half * exp(-half * half * M_PI * M_PI * x / 2.0)


cdef double _truncated_inv_gauss(double z, bitgen_t *rng) noexcept nogil:
    cdef double e1, e2, x, mu, y, muy
    if z * _T < 1.0:
        while True:
            while True:
                e1 = random_standard_exponential(rng)
                e2 = random_standard_exponential(rng)
                if e1 * e1 <= 2.0 * e2 / _T:
                    break
            x = _T / ((1.0 + _T * e1) * (1.0 + _T * e1))
            if random_standard_uniform(rng) <= exp(-0.5 * z * z * x):
                return x
    else:
        mu = 1.0 / z
        while True:
            y = random_standard_normal(rng)
            y *= y
            muy = mu * y
            x = mu + 0.5 * mu * muy - 0.5 * mu * sqrt(4.0 * muy + muy * muy)
            if random_standard_uniform(rng) > mu / (mu + x):
                x = mu * mu / x
            if x <= _T:
                return x


cdef double _sample_pg1(double c, bitgen_t *rng) noexcept nogil:
    cdef double z = 0.5 * (c if c >= 0 else -c)
    cdef double k = _HALF_PI_SQ + 0.5 * z * z
    cdef double p = (M_PI / (2.0 * k)) * exp(-k * _T)
    cdef double q = 2.0 * exp(-z) * _inv_gauss_cdf_unit(_T, z)
    cdef double ratio = p / (p + q)
    cdef double x, s, y
    cdef long n
    while True:
        if random_standard_uniform(rng) < ratio:
            x = _T + random_standard_exponential(rng) / k
        else:
            x = _truncated_inv_gauss(z, rng)
        s = _series_coef(0, x)
        y = random_standard_uniform(rng) * s
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


cdef inline bitgen_t *_get_bitgen(object rng):
    return <bitgen_t *>PyCapsule_GetPointer(rng.bit_generator.capsule, "BitGenerator")


def sample_pg1(double c, rng):
    """One exact draw from PG(1, c)."""
    cdef bitgen_t *bg = _get_bitgen(rng)
    return _sample_pg1(c, bg)


def sample_pg1_array(c, rng):
    """Independent PG(1, c_i) draws for each entry of c."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = \
        np.ascontiguousarray(np.asarray(c, dtype=np.float64).ravel())
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(flat.shape[0])
    cdef bitgen_t *bg = _get_bitgen(rng)
    cdef Py_ssize_t i
    for i in range(flat.shape[0]):
        out[i] = _sample_pg1(flat[i], bg)
    return out.reshape(np.asarray(c).shape)
