"""Closed-form propagation of first and second moments."""

from __future__ import annotations

import numpy as np

from .dynamics import SystemParams, noise_integrals, propagator
from .states import MomentState

INVARIANT_TOLERANCE = 1e-10


def propagate(params: SystemParams, state0: MomentState, t: float) -> MomentState:
    """Evolve the moments of ``state0`` (taken at time zero) to time ``t``.

    ``mu -> Q mu``, ``N -> Q* N Q^T + D`` and ``M -> Q M Q^T``. The anomalous
    block gets no bath term: both noise sources have vanishing ``<F F>``.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    scale = max(1.0, float(np.max(np.abs(state0.nmat))))
    if state0.violations() > INVARIANT_TOLERANCE * scale:
        raise ValueError("initial moments violate Hermiticity/symmetry/positivity")

    q = propagator(params, t).q
    noise = noise_integrals(params, t)
    mu = q @ state0.mu
    nmat = q.conj() @ state0.nmat @ q.T + noise.d
    mmat = q @ state0.mmat @ q.T
    return MomentState(mu, nmat, mmat, t)


def commutator_defect(params: SystemParams, t: float) -> np.ndarray:
    """``Q Q^dag - Dt + A - 1``, zero whenever ``[a_i(t), a_j^dag(t)] = delta_ij``.

    ``Dt[i, j] = 2 gamma int Q_{i1} Q*_{j1}``, the transpose of the
    normal-ordered noise matrix.
    """
    q = propagator(params, t).q
    noise = noise_integrals(params, t)
    return q @ q.conj().T - noise.d.T + noise.acomm - np.eye(2)
