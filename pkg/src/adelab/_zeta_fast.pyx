# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double-precision zeta jets along a vertical line."""

from cython.view cimport array as cvarray
from libc.math cimport log, ceil, M_PI, cos, sin

from ._fastconst import BERN_OVER_FACT, MAX_TERMS

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)

cdef double _bern[64]
cdef int _nterms = MAX_TERMS
for _k in range(MAX_TERMS + 1):
    _bern[_k] = BERN_OVER_FACT[_k]


cdef double complex _zeta(double complex s) noexcept nogil:
    cdef double mod = cabs(s)
    cdef int n_cut, n, k
    cdef double complex acc = 0, n_pow, term, rising, power
    cdef double inv_n2
    n_cut = <int>ceil(1.5 * (mod + 27.0) / M_PI)
    if n_cut < 8:
        n_cut = 8
    for n in range(1, n_cut):
        acc = acc + cexp(-s * log(<double>n))
    n_pow = cexp(-s * log(<double>n_cut))
    acc = acc + n_pow * n_cut / (s - 1.0) + 0.5 * n_pow
    rising = s
    power = n_pow / n_cut
    inv_n2 = 1.0 / (<double>n_cut * n_cut)
    for k in range(1, _nterms + 1):
        term = _bern[k] * rising * power
        acc = acc + term
        if cabs(term) < 1e-17 * cabs(acc):
            break
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        power = power * inv_n2
    return acc


def zeta_double(s):
    cdef double complex z = complex(s)
    if cabs(z - 1.0) < 1e-6:
        raise ValueError("zeta has a pole at s = 1")
    return complex(_zeta(z))


def zeta_line_jets(double x, ys, int m, double rho=0.25, int nodes=32):
    """[(zeta, zeta', ..., zeta^(m)) at x + iy for y in ys]."""
    cdef int j, k
    cdef double complex s, acc
    cdef double scale
    if nodes <= m:
        raise ValueError("need more contour nodes than the derivative order")
    cdef double complex[:] roots = _complex_buffer(nodes)
    cdef double complex[:] samples = _complex_buffer(nodes)
    for j in range(nodes):
        roots[j] = cos(2 * M_PI * j / nodes) + 1j * sin(2 * M_PI * j / nodes)
    out = []
    for y in ys:
        s = x + 1j * <double>y
        if cabs(s - 1.0) < 1e-6:
            raise ValueError("zeta has a pole at s = 1")
        row = [complex(_zeta(s))]
        if m:
            if cabs(s - 1.0) <= rho:
                raise ValueError("contour encloses the pole at s = 1")
            for j in range(nodes):
                samples[j] = _zeta(s + rho * roots[j])
            scale = 1.0
            for k in range(1, m + 1):
                scale *= k / rho
                acc = 0
                for j in range(nodes):
                    acc = acc + samples[j] * roots[(nodes - (j * k) % nodes) % nodes]
                row.append(complex(acc * scale / nodes))
        out.append(tuple(row))
    return out



cdef _complex_buffer(int size):
    return cvarray(shape=(size,), itemsize=sizeof(double complex), format="Zd")
