"""Pure-Python RK4 integrator for the moment equations (fallback for ``_kernels``)."""

import numpy as np


def _rhs(y, g12, c12, gamma, source):
    mu1, mu2, n11, n12, n21, n22, m11, m12, m21, m22 = y
    g11 = gamma
    g22 = -gamma
    return (
        g11 * mu1 + g12 * mu2,
        g12 * mu1 + g22 * mu2,
        g11 * n11 + c12 * n21 + n11 * g11 + n12 * g12 + source,
        g11 * n12 + c12 * n22 + n11 * g12 + n12 * g22,
        c12 * n11 + g22 * n21 + n21 * g11 + n22 * g12,
        c12 * n12 + g22 * n22 + n21 * g12 + n22 * g22,
        g11 * m11 + g12 * m21 + m11 * g11 + m12 * g12,
        g11 * m12 + g12 * m22 + m11 * g12 + m12 * g22,
        g12 * m11 + g22 * m21 + m21 * g11 + m22 * g12,
        g12 * m12 + g22 * m22 + m21 * g12 + m22 * g22,
    )


def _step(y, h, g12, c12, gamma, source):
    k1 = _rhs(y, g12, c12, gamma, source)
    k2 = _rhs([a + 0.5 * h * b for a, b in zip(y, k1)], g12, c12, gamma, source)
    k3 = _rhs([a + 0.5 * h * b for a, b in zip(y, k2)], g12, c12, gamma, source)
    k4 = _rhs([a + h * b for a, b in zip(y, k3)], g12, c12, gamma, source)
    sixth = h / 6.0
    return [
        a + sixth * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
    ]


def rk4_moments(g, gamma, y0, t, dt):
    """Integrate the packed moment vector ``y0`` from 0 to ``t`` with step ``dt``."""
    y = [complex(v) for v in y0]
    if len(y) != 10:
        raise ValueError("packed moment vector must have 10 entries")
    g12 = complex(0.0, -g)
    c12 = complex(0.0, g)
    gamma = float(gamma)
    source = 2.0 * gamma
    n_full = int(t / dt)
    rest = t - n_full * dt
    if rest < 1e-12 * dt:
        rest = 0.0
    for _ in range(n_full):
        y = _step(y, dt, g12, c12, gamma, source)
    if rest > 0.0:
        y = _step(y, rest, g12, c12, gamma, source)
    return np.array(y, dtype=complex)
