"""Effective non-Hermitian dynamics of the gain/loss cavity pair.

In the rotating frame the mode amplitudes obey ``da/dt = -i K a + F`` with

    K = [[i*gamma, g], [g, -i*gamma]]

``(-iK)^2 = s * I`` with ``s = gamma**2 - g**2``, so the propagator is
``exp(-iKt) = c(s, t) I + sh(s, t) (-iK)`` where ``c`` and ``sh`` are entire
functions of ``s``. Every quantity in this module is written in terms of that
pair, which keeps one code path valid on both sides of the exceptional point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

EP_TOLERANCE = 1e-12

# |s t^2| below this uses the Taylor series for (c, sh)
SERIES_SWITCH = 1e-4
SERIES_TERMS = 8

# |s t^2| below this uses the series for the integral of sh^2
ISS_SERIES_SWITCH = 0.25
ISS_SERIES_TERMS = 16


@dataclass(frozen=True)
class SystemParams:
    """Coupling ``g``, common gain/loss rate ``gamma`` and optical frequency.

    ``omega`` is carried for bookkeeping only; the rotating frame removes it
    from every observable.
    """

    g: float
    gamma: float
    omega: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.g) and math.isfinite(self.gamma)):
            raise ValueError("g and gamma must be finite")
        if self.g < 0:
            raise ValueError(f"coupling g must be non-negative, got {self.g}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")

    @property
    def s(self) -> float:
        """``gamma**2 - g**2``; its sign decides the regime."""
        return self.gamma * self.gamma - self.g * self.g

    def with_coupling(self, g: float) -> "SystemParams":
        return SystemParams(g=g, gamma=self.gamma, omega=self.omega)

    @property
    def generator(self) -> np.ndarray:
        """The matrix ``-iK`` driving the mode amplitudes."""
        return np.array(
            [[self.gamma, -1j * self.g], [-1j * self.g, -self.gamma]], dtype=complex
        )


class Regime(enum.Enum):
    PTS = "PTS"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    PTSB = "PTSB"


def classify_regime(params: SystemParams) -> Regime:
    s = params.s
    scale = max(params.g**2, params.gamma**2)
    if abs(s) <= EP_TOLERANCE * scale:
        return Regime.EXCEPTIONAL_POINT
    return Regime.PTSB if s > 0 else Regime.PTS


def eigenvalues(params: SystemParams) -> tuple[complex, complex]:
    """Eigenvalues ``(lambda_plus, lambda_minus)`` of ``K``.

    Real pair ``+-sqrt(g^2 - gamma^2)`` for ``gamma <= g``, imaginary pair
    otherwise. ``lambda_plus`` has the non-negative real part, then the
    non-negative imaginary part.
    """
    s = params.s
    if s <= 0:
        lam = complex(math.sqrt(-s), 0.0)
    else:
        lam = complex(0.0, math.sqrt(s))
    return lam, -lam


@dataclass(frozen=True)
class HyperbolicPair:
    c: float
    sh: float


def _pair_series(x: float, t: float) -> tuple[float, float]:
    c_sum = 0.0
    sh_sum = 0.0
    c_term = 1.0  # x^k / (2k)!
    sh_term = 1.0  # x^k / (2k+1)!
    for k in range(SERIES_TERMS):
        c_sum += c_term
        sh_sum += sh_term
        c_term *= x / ((2 * k + 1) * (2 * k + 2))
        sh_term *= x / ((2 * k + 2) * (2 * k + 3))
    return c_sum, t * sh_sum


def _pair(s: float, t: float) -> tuple[float, float]:
    x = s * t * t
    if abs(x) < SERIES_SWITCH:
        return _pair_series(x, t)
    if s > 0:
        r = math.sqrt(s)
        return math.cosh(r * t), math.sinh(r * t) / r
    r = math.sqrt(-s)
    return math.cos(r * t), math.sin(r * t) / r


def hyperbolic_pair(s: float, t: float) -> HyperbolicPair:
    """Evaluate ``c = cosh(sqrt(s) t)`` and ``sh = sinh(sqrt(s) t)/sqrt(s)``.

    Both are entire in ``s``: for ``s < 0`` they become ``cos``/``sin`` of
    ``sqrt(-s) t`` and at ``s = 0`` they reduce to ``(1, t)``.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return HyperbolicPair(*_pair(s, t))


def _entries(params: SystemParams, t: float) -> tuple[float, float, float, float]:
    # (q11, q22, g*sh, sh); q12 = q21 = -1j*g*sh
    c, sh = _pair(params.s, t)
    gamma = params.gamma
    q11 = c + gamma * sh
    gsh = params.g * sh
    if params.s >= 0:
        # c - gamma*sh cancels badly deep in the broken phase; det Q = 1 gives it
        # from the well-conditioned entries instead.
        q22 = (1.0 - gsh * gsh) / q11
    else:
        q22 = c - gamma * sh
    return q11, q22, gsh, sh


@dataclass(frozen=True)
class Propagator:
    q: np.ndarray
    t: float
    params: SystemParams

    @property
    def det(self) -> complex:
        q = self.q
        return complex(q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0])


def propagator(params: SystemParams, t: float) -> Propagator:
    """``Q(t) = exp(-iKt)``.

    >>> propagator(SystemParams(g=1.0, gamma=1.0), 2.0).q
    array([[ 3.+0.j,  0.-2.j],
           [ 0.-2.j, -1.+0.j]])
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    q11, q22, gsh, _ = _entries(params, t)
    q = np.array([[q11, -1j * gsh], [-1j * gsh, q22]], dtype=complex)
    q.setflags(write=False)
    return Propagator(q=q, t=t, params=params)


@dataclass(frozen=True)
class NoiseIntegrals:
    """Bath contributions accumulated over ``[0, t]``.

    ``d[i, j] = 2 gamma int Q*_{i1} Q_{j1}`` is the normal-ordered gain-bath
    term added to ``<a_i^dag a_j>``; ``acomm[i, j] = 2 gamma int Q_{i2} Q*_{j2}``
    is the anti-normal loss-bath term that enters the commutator.
    """

    d: np.ndarray
    acomm: np.ndarray
    t: float


def _iss_series(s: float, t: float) -> float:
    # int_0^t sh^2 = 2 t^3 sum_j (4 s t^2)^j / (2j+3)!
    x = 4.0 * s * t * t
    total = 0.0
    term = 1.0 / 6.0
    for j in range(ISS_SERIES_TERMS):
        total += term
        term *= x / ((2 * j + 4) * (2 * j + 5))
    return 2.0 * t**3 * total


def primitive_integrals(s: float, t: float) -> tuple[float, float, float]:
    """Return ``(int c^2, int c*sh, int sh^2)`` over ``[0, t]``."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    _, sh = _pair(s, t)
    _, sh2 = _pair(s, 2.0 * t)
    i_cc = 0.5 * t + 0.25 * sh2
    i_cs = 0.5 * sh * sh
    if abs(s * t * t) < ISS_SERIES_SWITCH:
        i_ss = _iss_series(s, t)
    else:
        i_ss = (0.25 * sh2 - 0.5 * t) / s
    return i_cc, i_cs, i_ss


def noise_integrals(params: SystemParams, t: float) -> NoiseIntegrals:
    g, gamma = params.g, params.gamma
    i_cc, i_cs, i_ss = primitive_integrals(params.s, t)
    two_gamma = 2.0 * gamma

    d11 = two_gamma * (i_cc + 2.0 * gamma * i_cs + gamma * gamma * i_ss)
    d22 = two_gamma * g * g * i_ss
    d12 = -1j * two_gamma * g * (i_cs + gamma * i_ss)
    d = np.array([[d11, d12], [d12.conjugate(), d22]], dtype=complex)

    a22 = two_gamma * (i_cc - 2.0 * gamma * i_cs + gamma * gamma * i_ss)
    a12 = -1j * two_gamma * g * (i_cs - gamma * i_ss)
    acomm = np.array([[d22, a12], [a12.conjugate(), a22]], dtype=complex)

    d.setflags(write=False)
    acomm.setflags(write=False)
    return NoiseIntegrals(d=d, acomm=acomm, t=t)


def omega(params: SystemParams) -> complex:
    """Principal ``sqrt(gamma^2 - g^2)``; imaginary in the PTS phase."""
    return cmath.sqrt(params.s)
