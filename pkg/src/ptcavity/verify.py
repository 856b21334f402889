"""Self-verification grids: closed forms against the oracles and invariants."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import oracle
from .dynamics import SystemParams, hyperbolic_pair, noise_integrals, propagator
from .moments import commutator_defect, propagate
from .states import Coherent, Noon, Thermal, Vacuum, initial_moments

GAMMA_GRID = (0.25, 0.5, 0.9, 1.0, 1.1, 1.5)
TIME_GRID = (0.5, 1.0, 2.0, 3.0)
FAMILIES = (Vacuum(), Coherent(1.0, math.pi / 4, 1.0, math.pi / 4), Noon(1), Thermal(1.0))


@dataclass
class CheckResult:
    name: str
    error: float
    tolerance: float
    passed: bool
    exempt: bool = False
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def rel_max(x: np.ndarray, ref: np.ndarray) -> float:
    scale = float(np.max(np.abs(ref)))
    diff = float(np.max(np.abs(np.asarray(x) - np.asarray(ref))))
    return diff / scale if scale > 0 else diff


def _state_vector(state) -> np.ndarray:
    return np.concatenate([state.mu, state.nmat.ravel(), state.mmat.ravel()])


def random_points(n: int, seed: int, t_max: float = 5.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.column_stack(
        [rng.uniform(0.1, 3.0, n), rng.uniform(0.1, 3.0, n), rng.uniform(0.0, t_max, n)]
    )


def det_error(points: np.ndarray) -> float:
    """Largest ``|det Q - 1|`` relative to the size of the products forming it."""
    worst = 0.0
    for g, gamma, t in points:
        q = propagator(SystemParams(g, gamma), t).q
        scale = max(1.0, abs(q[0, 0] * q[1, 1]) + abs(q[0, 1] * q[1, 0]))
        det = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
        worst = max(worst, abs(det - 1.0) / scale)
    return worst


def pythagorean_error(points: np.ndarray) -> float:
    worst = 0.0
    for g, gamma, t in points:
        s = gamma * gamma - g * g
        pair = hyperbolic_pair(s, t)
        scale = max(1.0, pair.c**2 + abs(s) * pair.sh**2)
        worst = max(worst, abs(pair.c**2 - s * pair.sh**2 - 1.0) / scale)
    return worst


def semigroup_error(points: np.ndarray, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for g, gamma, t in points:
        params = SystemParams(g, gamma)
        t1 = rng.uniform(0.0, t)
        t2 = t - t1
        joint = propagator(params, t1 + t2).q
        split = propagator(params, t1).q @ propagator(params, t2).q
        scale = max(1.0, float(np.max(np.abs(joint))))
        worst = max(worst, float(np.max(np.abs(split - joint))) / scale)
    return worst


def ep_continuity_error(offset: float = 1e-6) -> float:
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        at_ep = propagator(SystemParams(1.0, 1.0), t).q
        for gamma in (1.0 - offset, 1.0 + offset):
            near = propagator(SystemParams(1.0, gamma), t).q
            worst = max(worst, float(np.max(np.abs(near - at_ep))))
    return worst


def commutator_error(points: np.ndarray) -> float:
    """Largest commutator defect relative to ``max(1, |Q Q^dag|)``."""
    worst = 0.0
    for g, gamma, t in points:
        params = SystemParams(g, gamma)
        q = propagator(params, t).q
        scale = max(1.0, float(np.max(np.abs(q @ q.conj().T))))
        worst = max(worst, float(np.max(np.abs(commutator_defect(params, t)))) / scale)
    return worst


def ode_error(dt: float = 1e-3, gammas=GAMMA_GRID, times=TIME_GRID, families=FAMILIES) -> float:
    worst = 0.0
    for gamma in gammas:
        params = SystemParams(1.0, gamma)
        for state in families:
            m0 = initial_moments(state)
            for t in times:
                exact = _state_vector(propagate(params, m0, t))
                numeric = _state_vector(oracle.ode_moments(params, m0, t, dt))
                worst = max(worst, rel_max(exact, numeric))
    return worst


def quadrature_error(panels: int = 2000, gammas=GAMMA_GRID, times=TIME_GRID) -> float:
    worst = 0.0
    for gamma in gammas:
        params = SystemParams(1.0, gamma)
        for t in times:
            closed = noise_integrals(params, t)
            quad = oracle.quad_noise_integrals(params, t, panels)
            worst = max(worst, rel_max(closed.d, quad.d), rel_max(closed.acomm, quad.acomm))
    return worst


def expm_error(points: np.ndarray) -> float:
    worst = 0.0
    for g, gamma, t in points:
        params = SystemParams(g, gamma)
        if float(np.max(np.abs(params.generator))) * t > 20.0:
            continue
        worst = max(worst, rel_max(oracle.expm_taylor(params, t).q, propagator(params, t).q))
    return worst


def rk4_order_ratio(dt: float = 0.05) -> float:
    """Error ratio between steps ``dt`` and ``dt/2``; about 16 for a 4th-order method."""
    params = SystemParams(1.0, 0.5)
    m0 = initial_moments(Coherent(1.0, 0.3, 1.0, 1.1))
    exact = _state_vector(propagate(params, m0, 2.0))
    coarse = rel_max(_state_vector(oracle.ode_moments(params, m0, 2.0, dt)), exact)
    fine = rel_max(_state_vector(oracle.ode_moments(params, m0, 2.0, dt / 2)), exact)
    return coarse / fine


def fock_error() -> float:
    worst = 0.0
    for state in FAMILIES + (Coherent(1.0, math.pi / 2, 2.0, math.pi / 2), Noon(3)):
        closed = initial_moments(state)
        brute = oracle.fock_moments(state)
        worst = max(worst, float(np.max(np.abs(_state_vector(closed) - _state_vector(brute)))))
    return worst


# (name, tolerance, strict-exempt, metric). EP continuity is bounded by the
# finite gamma offset itself, so --strict leaves it at the base tolerance.
_CHECKS: list[tuple[str, float, bool, Callable[[], float]]] = [
    ("det_Q", 1e-12, False, lambda: det_error(random_points(1000, 1))),
    ("pythagorean_identity", 1e-12, False, lambda: pythagorean_error(random_points(1000, 2))),
    ("semigroup", 1e-10, False, lambda: semigroup_error(random_points(1000, 3), 4)),
    ("ep_continuity", 1e-5, True, ep_continuity_error),
    ("commutator_defect", 1e-9, False, lambda: commutator_error(random_points(1000, 5))),
    ("expm_taylor_vs_propagator", 1e-10, False, lambda: expm_error(random_points(300, 6))),
    ("rk4_vs_closed_form", 1e-6, False, ode_error),
    ("simpson_vs_closed_form", 1e-8, False, quadrature_error),
    ("fock_concordance", 1e-9, False, fock_error),
]


def run_checks(strict: bool = False) -> list[CheckResult]:
    results = []
    for name, tol, exempt, metric in _CHECKS:
        start = time.perf_counter()
        err = float(metric())
        elapsed = time.perf_counter() - start
        use_tol = tol if (exempt or not strict) else tol / 10.0
        results.append(
            CheckResult(name, err, use_tol, bool(err <= use_tol), exempt and strict, elapsed)
        )
    start = time.perf_counter()
    ratio = rk4_order_ratio()
    # a bracket around the ideal ratio 16 rather than an error bound
    results.append(
        CheckResult("rk4_order_ratio", ratio, 16.0, bool(8.0 <= ratio <= 32.0),
                    strict, time.perf_counter() - start)
    )
    return results
