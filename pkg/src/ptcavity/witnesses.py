"""Photon numbers, Zeno parameters and two-mode nonclassicality witnesses.

Fourth-order moments are always obtained from the Gaussian-style decoupling

    <ABCD> ~ <AB><CD> + <AD><BC> + <AC><BD> - 2<A><B><C><D>

applied to the exact second moments, whatever the input state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .dynamics import SystemParams
from .moments import propagate
from .states import InputState, MomentState, initial_moments

ZENO_GUARD = 1e-15


@dataclass(frozen=True)
class OperatorSpec:
    """``a_mode`` or, with ``dagger``, ``a_mode^dag``; modes are 1 and 2."""

    mode: int
    dagger: bool = False

    def __post_init__(self):
        if self.mode not in (1, 2):
            raise ValueError(f"mode must be 1 or 2, got {self.mode}")


def a(mode: int) -> OperatorSpec:
    return OperatorSpec(mode, False)


def ad(mode: int) -> OperatorSpec:
    return OperatorSpec(mode, True)


def photon_numbers(state: MomentState) -> tuple[float, float]:
    return float(state.nmat[0, 0].real), float(state.nmat[1, 1].real)


def first_moment(state: MomentState, op: OperatorSpec) -> complex:
    value = complex(state.mu[op.mode - 1])
    return value.conjugate() if op.dagger else value


def two_op_expectation(state: MomentState, x: OperatorSpec, y: OperatorSpec) -> complex:
    """Exact ``<x y>`` from ``N``, ``M`` and the canonical commutator."""
    i, j = x.mode - 1, y.mode - 1
    if x.dagger and not y.dagger:
        return complex(state.nmat[i, j])
    if not x.dagger and not y.dagger:
        return complex(state.mmat[i, j])
    if x.dagger and y.dagger:
        return complex(state.mmat[j, i]).conjugate()
    # <a_i a_j^dag> = <a_j^dag a_i> + delta_ij
    return complex(state.nmat[j, i]) + (1.0 if i == j else 0.0)


def fourth_moment_decoupled(state: MomentState, ops: Sequence[OperatorSpec]) -> complex:
    A, B, C, D = ops
    pair = two_op_expectation
    mean = first_moment
    return (
        pair(state, A, B) * pair(state, C, D)
        + pair(state, A, D) * pair(state, B, C)
        + pair(state, A, C) * pair(state, B, D)
        - 2.0 * mean(state, A) * mean(state, B) * mean(state, C) * mean(state, D)
    )


class ZenoValues(NamedTuple):
    zeta1: float
    zeta2: float
    defined: bool


def zeno_from_numbers(
    n_coupled: tuple[float, float], n_free: tuple[float, float]
) -> ZenoValues:
    denom = n_coupled[0] * n_coupled[1]
    if abs(denom) < ZENO_GUARD:
        return ZenoValues(math.nan, math.nan, False)
    return ZenoValues(
        (n_coupled[0] - n_free[0]) / denom,
        (n_coupled[1] - n_free[1]) / denom,
        True,
    )


def zeno_parameter(params: SystemParams, state: InputState, t: float) -> ZenoValues:
    """Coupling-induced change of each mode's photon number, normalised by ``n1*n2``.

    Negative values flag the Zeno effect, positive ones the anti-Zeno effect.
    The uncoupled reference is a second propagation with ``g = 0``.
    """
    m0 = initial_moments(state)
    coupled = photon_numbers(propagate(params, m0, t))
    free = photon_numbers(propagate(params.with_coupling(0.0), m0, t))
    return zeno_from_numbers(coupled, free)


def antibunching_witness(state: MomentState) -> float:
    """``<a1^dag a2^dag a1 a2> - n1 n2``; negative means intermodal antibunching."""
    n1, n2 = photon_numbers(state)
    quartic = fourth_moment_decoupled(state, (ad(1), ad(2), a(1), a(2)))
    return quartic.real - n1 * n2


def antibunching_reduced(state: MomentState) -> float:
    """Closed form of :func:`antibunching_witness` once the decoupling is expanded."""
    mu1, mu2 = state.mu
    return (
        abs(state.mmat[0, 1]) ** 2
        + abs(state.nmat[0, 1]) ** 2
        - 2.0 * abs(mu1) ** 2 * abs(mu2) ** 2
    )


def _quadratic_variance(state: MomentState, lower, upper, phase: complex) -> tuple[complex, complex]:
    # X = (phase* L + phase L')/2 with L = lower pair, L' = upper pair
    # returns (<X^2>, <X>) with the quartic terms decoupled
    ph = phase
    phc = phase.conjugate()
    x2 = 0.25 * (
        phc * phc * fourth_moment_decoupled(state, lower + lower)
        + fourth_moment_decoupled(state, lower + upper)
        + fourth_moment_decoupled(state, upper + lower)
        + ph * ph * fourth_moment_decoupled(state, upper + upper)
    )
    x1 = 0.5 * (
        phc * two_op_expectation(state, *lower) + ph * two_op_expectation(state, *upper)
    )
    return x2, x1


def sum_squeezing(state: MomentState, phi: float) -> float:
    """Hillery sum-squeezing parameter ``V``; negative certifies squeezing along ``phi``.

    ``V_phi = (e^{-i phi} a1 a2 + e^{i phi} a1^dag a2^dag) / 2``.
    """
    n1, n2 = photon_numbers(state)
    v2, v1 = _quadratic_variance(state, (a(1), a(2)), (ad(1), ad(2)), cmath.exp(1j * phi))
    return (v2 - v1 * v1).real - (n1 + n2 + 1.0) / 4.0


def difference_squeezing(state: MomentState, phi: float) -> float:
    """Hillery difference-squeezing parameter ``W`` with
    ``W_phi = (e^{i phi} a1 a2^dag + e^{-i phi} a1^dag a2) / 2``."""
    n1, n2 = photon_numbers(state)
    w2, w1 = _quadratic_variance(state, (ad(1), a(2)), (a(1), ad(2)), cmath.exp(1j * phi))
    return (w2 - w1 * w1).real - abs(n1 - n2) / 4.0


@dataclass(frozen=True)
class WitnessReport:
    n1: float
    n2: float
    zeta1: float
    zeta2: float
    zeta_defined: bool
    antibunch: float
    sumsq: float
    diffsq: float
    phi: float
    t: float


def witness_report(
    params: SystemParams, state: InputState, t: float, phi: float = math.pi / 4
) -> WitnessReport:
    m0 = initial_moments(state)
    moments = propagate(params, m0, t)
    n = photon_numbers(moments)
    free = photon_numbers(propagate(params.with_coupling(0.0), m0, t))
    zeta = zeno_from_numbers(n, free)
    return WitnessReport(
        n1=n[0],
        n2=n[1],
        zeta1=zeta.zeta1,
        zeta2=zeta.zeta2,
        zeta_defined=zeta.defined,
        antibunch=antibunching_witness(moments),
        sumsq=sum_squeezing(moments, phi),
        diffsq=difference_squeezing(moments, phi),
        phi=phi,
        t=t,
    )
