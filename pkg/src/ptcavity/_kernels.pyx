# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 integrator for the moment equations."""

import numpy as np

cdef struct Gen:
    double complex g11
    double complex g12
    double complex g22
    double complex c12
    double source


cdef inline void _rhs(Gen* G, double complex* y, double complex* out) nogil:
    # y = [mu1, mu2, N11, N12, N21, N22, M11, M12, M21, M22]
    cdef double complex g11 = G.g11, g12 = G.g12, g22 = G.g22
    cdef double complex c11 = g11.conjugate(), c12 = G.c12, c22 = g22.conjugate()
    out[0] = g11 * y[0] + g12 * y[1]
    out[1] = g12 * y[0] + g22 * y[1]
    # dN = G* N + N G^T + source e11
    out[2] = c11 * y[2] + c12 * y[4] + y[2] * g11 + y[3] * g12 + G.source
    out[3] = c11 * y[3] + c12 * y[5] + y[2] * g12 + y[3] * g22
    out[4] = c12 * y[2] + c22 * y[4] + y[4] * g11 + y[5] * g12
    out[5] = c12 * y[3] + c22 * y[5] + y[4] * g12 + y[5] * g22
    # dM = G M + M G^T
    out[6] = g11 * y[6] + g12 * y[8] + y[6] * g11 + y[7] * g12
    out[7] = g11 * y[7] + g12 * y[9] + y[6] * g12 + y[7] * g22
    out[8] = g12 * y[6] + g22 * y[8] + y[8] * g11 + y[9] * g12
    out[9] = g12 * y[7] + g22 * y[9] + y[8] * g12 + y[9] * g22


cdef void _step(Gen* G, double complex* y, double h) nogil:
    cdef double complex k1[10]
    cdef double complex k2[10]
    cdef double complex k3[10]
    cdef double complex k4[10]
    cdef double complex tmp[10]
    cdef int i
    _rhs(G, y, k1)
    for i in range(10):
        tmp[i] = y[i] + 0.5 * h * k1[i]
    _rhs(G, tmp, k2)
    for i in range(10):
        tmp[i] = y[i] + 0.5 * h * k2[i]
    _rhs(G, tmp, k3)
    for i in range(10):
        tmp[i] = y[i] + h * k3[i]
    _rhs(G, tmp, k4)
    for i in range(10):
        y[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def rk4_moments(double g, double gamma, y0, double t, double dt):
    """Integrate the packed moment vector ``y0`` from 0 to ``t`` with step ``dt``."""
    cdef double complex y[10]
    cdef Gen G
    cdef long n_full, k
    cdef double rest
    cdef int i
    arr = np.ascontiguousarray(y0, dtype=np.complex128)
    if arr.shape[0] != 10:
        raise ValueError("packed moment vector must have 10 entries")
    for i in range(10):
        y[i] = arr[i]
    G.g11 = gamma
    G.g12 = -1j * g
    G.g22 = -gamma
    G.c12 = 1j * g
    G.source = 2.0 * gamma
    n_full = <long>(t / dt)
    rest = t - n_full * dt
    # guard against round-off leaving a sliver step
    if rest < 1e-12 * dt:
        rest = 0.0
    with nogil:
        for k in range(n_full):
            _step(&G, y, dt)
        if rest > 0.0:
            _step(&G, y, rest)
    out = np.empty(10, dtype=np.complex128)
    for i in range(10):
        out[i] = y[i]
    return out
