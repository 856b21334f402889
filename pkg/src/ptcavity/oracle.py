"""Independent numerical references for the closed-form results.

None of these routines use the closed-form noise integrals or moment maps:
the moment ODEs are stepped with classical RK4, the bath integrals are done
by composite Simpson quadrature over sampled propagators, the propagator is
re-derived by a scaled Taylor series, and t = 0 expectations are computed
directly on a truncated two-mode Fock space.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import kernels
from .dynamics import NoiseIntegrals, Propagator, SystemParams, _entries
from .states import Coherent, InputState, MomentState, Noon, Thermal, Vacuum
from .witnesses import OperatorSpec, a, ad

TAIL_BOUND = 1e-12


class InsufficientTruncation(ValueError):
    """The requested Fock cutoff leaves more than the allowed probability tail."""


def pack(state: MomentState) -> np.ndarray:
    return np.concatenate([state.mu, state.nmat.ravel(), state.mmat.ravel()])


def unpack(y: np.ndarray, t: float) -> MomentState:
    return MomentState(y[:2], y[2:6].reshape(2, 2), y[6:10].reshape(2, 2), t)


def ode_moments(params: SystemParams, state0: MomentState, t: float, dt: float) -> MomentState:
    """RK4 solution of the moment equations at fixed step ``dt``.

    The last step is shortened to land exactly on ``t``.
    """
    if not dt > 0:
        raise ValueError(f"step must be positive, got {dt}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if t == 0:
        return unpack(pack(state0), 0.0)
    y = kernels.rk4_moments(params.g, params.gamma, pack(state0), float(t), float(dt))
    return unpack(np.asarray(y), t)


def simpson_weights(panels: int, h: float) -> np.ndarray:
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def quad_noise_integrals(params: SystemParams, t: float, panels: int = 2000) -> NoiseIntegrals:
    if panels < 2 or panels % 2:
        raise ValueError(f"Simpson needs an even panel count >= 2, got {panels}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    taus = np.linspace(0.0, t, panels + 1)
    qs = np.empty((panels + 1, 2, 2), dtype=complex)
    for k, tau in enumerate(taus):
        q11, q22, gsh, _ = _entries(params, float(tau))
        qs[k] = ((q11, -1j * gsh), (-1j * gsh, q22))
    w = simpson_weights(panels, t / panels) * 2.0 * params.gamma

    col1 = qs[:, :, 0]
    col2 = qs[:, :, 1]
    d = np.einsum("k,ki,kj->ij", w, col1.conj(), col1)
    acomm = np.einsum("k,ki,kj->ij", w, col2, col2.conj())
    return NoiseIntegrals(d=d, acomm=acomm, t=t)


def expm_taylor(params: SystemParams, t: float, degree: int = 18) -> Propagator:
    """``exp(-iKt)`` by scaling and squaring a truncated Taylor series."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if degree < 12:
        raise ValueError("Taylor degree must be at least 12")
    x = params.generator * t
    norm = float(np.max(np.sum(np.abs(x), axis=1)))
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    x = x / 2.0**squarings

    result = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, degree + 1):
        term = term @ x / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return Propagator(q=result, t=t, params=params)


# --- truncated Fock space -------------------------------------------------

def _poisson_tail(mean: float, dim: int) -> float:
    """P(n >= dim) for a Poisson distribution, summed term by term."""
    if mean == 0.0:
        return 0.0
    term = math.exp(-mean + dim * math.log(mean) - math.lgamma(dim + 1))
    tail = 0.0
    n = dim
    while term > tail * 1e-17 and term > 1e-300:
        tail += term
        n += 1
        term *= mean / n
    return tail


def default_dim(state: InputState) -> int:
    if isinstance(state, Vacuum):
        return 8
    if isinstance(state, Noon):
        return max(8, state.n + 1)
    if isinstance(state, Coherent):
        dim = 20
        while _coherent_tail(state, dim) >= TAIL_BOUND:
            dim += 1
        return dim
    if isinstance(state, Thermal):
        dim = 8
        while _thermal_tail(state, dim) >= TAIL_BOUND:
            dim += 1
        return dim
    raise TypeError(f"unsupported input state: {state!r}")


def _coherent_tail(state: Coherent, dim: int) -> float:
    t1 = _poisson_tail(state.r1**2, dim)
    t2 = _poisson_tail(state.r2**2, dim)
    return t1 + t2


def _thermal_tail(state: Thermal, dim: int) -> float:
    # geometric occupation: P(n >= dim) = exp(-beta dim) per mode
    return 2.0 * math.exp(-state.beta * dim)


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    amps = np.empty(dim, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def _apply(op: OperatorSpec, psi: np.ndarray) -> np.ndarray:
    # psi has shape (batch, D, D); axis 1 is mode 1, axis 2 is mode 2
    axis = op.mode
    size = psi.shape[axis]
    out = np.zeros_like(psi)
    src = [slice(None)] * 3
    dst = [slice(None)] * 3
    shape = [1, 1, 1]
    shape[axis] = size - 1
    factor = np.sqrt(np.arange(1, size)).reshape(shape)
    if op.dagger:
        # (a^dag psi)[n] = sqrt(n) psi[n-1]
        dst[axis] = slice(1, None)
        src[axis] = slice(None, -1)
    else:
        # (a psi)[n] = sqrt(n+1) psi[n+1]
        dst[axis] = slice(None, -1)
        src[axis] = slice(1, None)
    out[tuple(dst)] = factor * psi[tuple(src)]
    return out


def _ensemble(state: InputState, dim: int, pad: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (weights, kets) with kets of shape (batch, dim+pad, dim+pad)."""
    size = dim + pad
    if isinstance(state, Vacuum):
        psi = np.zeros((1, size, size), dtype=complex)
        psi[0, 0, 0] = 1.0
        return np.ones(1), psi
    if isinstance(state, Noon):
        if dim <= state.n:
            raise InsufficientTruncation(f"NOON({state.n}) needs dim > {state.n}")
        psi = np.zeros((1, size, size), dtype=complex)
        psi[0, state.n, 0] = psi[0, 0, state.n] = 1.0 / math.sqrt(2.0)
        return np.ones(1), psi
    if isinstance(state, Coherent):
        tail = _coherent_tail(state, dim)
        if tail >= TAIL_BOUND:
            raise InsufficientTruncation(f"coherent tail {tail:.2e} at dim={dim}")
        a1, a2 = state.alphas
        psi = np.zeros((1, size, size), dtype=complex)
        psi[0, :dim, :dim] = np.outer(_coherent_amplitudes(a1, dim), _coherent_amplitudes(a2, dim))
        return np.ones(1), psi
    raise TypeError(f"unsupported input state: {state!r}")


def _thermal_expectation(state: Thermal, ops: Sequence[OperatorSpec], dim: int) -> complex:
    # product of diagonal single-mode states: operators on different modes
    # commute, so the trace factorises into one matrix trace per mode
    tail = _thermal_tail(state, dim)
    if tail >= TAIL_BOUND:
        raise InsufficientTruncation(f"thermal tail {tail:.2e} at dim={dim}")
    size = dim + len(ops)
    lower = np.diag(np.sqrt(np.arange(1, size)), 1)
    q = math.exp(-state.beta)
    rho = np.zeros(size)
    rho[:dim] = (1.0 - q) * q ** np.arange(dim)
    value = 1.0 + 0j
    for mode in (1, 2):
        prod = np.eye(size)
        for op in ops:
            if op.mode == mode:
                prod = prod @ (lower.T if op.dagger else lower)
        value *= np.dot(rho, np.diag(prod))
    return complex(value)


def fock_expectation(
    state: InputState, ops: Sequence[OperatorSpec], dim: int | None = None
) -> complex:
    """Exact ``<ops[0] ops[1] ...>`` on the truncated two-mode Fock space.

    Kets are padded by ``len(ops)`` levels, so raising operators never hit
    the cutoff; only the truncation of the state itself is approximate.
    """
    if not 1 <= len(ops) <= 4:
        raise ValueError("between one and four operators are supported")
    if dim is None:
        dim = default_dim(state)
    if dim < 8:
        raise ValueError(f"truncation dimension must be at least 8, got {dim}")
    if isinstance(state, Thermal):
        return _thermal_expectation(state, ops, dim)
    weights, kets = _ensemble(state, dim, pad=len(ops))
    out = kets
    for op in reversed(ops):
        out = _apply(op, out)
    amps = np.einsum("bij,bij->b", kets.conj(), out)
    return complex(np.dot(weights, amps))


def fock_moments(state: InputState, dim: int | None = None) -> MomentState:
    """All first and second moments of ``state`` by brute force."""
    mu = [fock_expectation(state, [a(i)], dim) for i in (1, 2)]
    nmat = [[fock_expectation(state, [ad(i), a(j)], dim) for j in (1, 2)] for i in (1, 2)]
    mmat = [[fock_expectation(state, [a(i), a(j)], dim) for j in (1, 2)] for i in (1, 2)]
    return MomentState(np.array(mu), np.array(nmat), np.array(mmat), 0.0)
