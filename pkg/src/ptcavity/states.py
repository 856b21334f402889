"""Input states and their exact first and second moments at t = 0."""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Coherent:
    """Product coherent state ``|r1 e^{i theta1}, r2 e^{i theta2}>``."""

    r1: float
    theta1: float
    r2: float
    theta2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("coherent amplitudes r1, r2 must be non-negative")

    @property
    def alphas(self) -> tuple[complex, complex]:
        return cmath.rect(self.r1, self.theta1), cmath.rect(self.r2, self.theta2)

    @property
    def delta_theta(self) -> float:
        return self.theta1 - self.theta2


@dataclass(frozen=True)
class Noon:
    """``(|n,0> + |0,n>)/sqrt(2)``."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"NOON photon number must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class Thermal:
    """Two-mode isotropic thermal state with ``beta = hbar*omega/kT``."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"thermal beta must be positive, got {self.beta}")

    @property
    def mean_occupation(self) -> float:
        return 1.0 / math.expm1(self.beta)


InputState = Union[Vacuum, Coherent, Noon, Thermal]


@dataclass(frozen=True)
class MomentState:
    """Equal-time moments of the two modes.

    ``mu[i] = <a_i>``, ``nmat[i, j] = <a_i^dag a_j>``, ``mmat[i, j] = <a_i a_j>``.
    """

    mu: np.ndarray
    nmat: np.ndarray
    mmat: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        for name in ("mu", "nmat", "mmat"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.mu.shape != (2,) or self.nmat.shape != (2, 2) or self.mmat.shape != (2, 2):
            raise ValueError("MomentState expects a 2-vector and two 2x2 matrices")

    def violations(self) -> float:
        """Largest breach of the Hermitian/symmetric/PSD invariants."""
        n, m = self.nmat, self.mmat
        herm = float(np.max(np.abs(n - n.conj().T)))
        sym = float(np.max(np.abs(m - m.T)))
        low = float(np.min(np.linalg.eigvalsh(0.5 * (n + n.conj().T))))
        return max(herm, sym, max(0.0, -low))

    def rebased(self) -> "MomentState":
        """Same moments relabelled as an initial condition."""
        return MomentState(self.mu, self.nmat, self.mmat, 0.0)


def initial_moments(state: InputState) -> MomentState:
    if isinstance(state, Vacuum):
        zero = np.zeros((2, 2), dtype=complex)
        return MomentState(np.zeros(2), zero, zero)
    if isinstance(state, Coherent):
        mu = np.array(state.alphas, dtype=complex)
        return MomentState(mu, np.outer(mu.conj(), mu), np.outer(mu, mu))
    if isinstance(state, Noon):
        # <a1^dag a2> survives only for n = 1, where |1,0> and |0,1> are linked
        x = 0.5 if state.n == 1 else 0.0
        half = state.n / 2.0
        nmat = np.array([[half, x], [x, half]], dtype=complex)
        return MomentState(np.zeros(2), nmat, np.zeros((2, 2)))
    if isinstance(state, Thermal):
        nbar = state.mean_occupation
        return MomentState(np.zeros(2), nbar * np.eye(2), np.zeros((2, 2)))
    raise TypeError(f"unsupported input state: {state!r}")


_ANGLE = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<num>\d*\.?\d*(?:[eE][-+]?\d+)?)?\s*\*?\s*(?P<pi>pi)?\s*"
    r"(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


def parse_angle(text: str) -> float:
    """Parse radians, allowing ``pi`` fractions such as ``pi/4``, ``3pi/2``, ``-pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text.strip().lower())
    if not m or not m.group("pi"):
        raise ValueError(f"cannot parse angle {text!r}")
    num = float(m.group("num")) if m.group("num") else 1.0
    den = float(m.group("den")) if m.group("den") else 1.0
    value = num * math.pi / den
    return -value if m.group("sign") == "-" else value


def parse_state(spec: str) -> InputState:
    """Parse ``vacuum``, ``coherent:r1,theta1,r2,theta2``, ``noon:n`` or ``thermal:beta``."""
    kind, _, rest = spec.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "vacuum" and not rest:
            return Vacuum()
        if kind == "coherent":
            parts = [p for p in rest.split(",")]
            if len(parts) != 4:
                raise ValueError("coherent needs r1,theta1,r2,theta2")
            return Coherent(
                r1=float(parts[0]),
                theta1=parse_angle(parts[1]),
                r2=float(parts[2]),
                theta2=parse_angle(parts[3]),
            )
        if kind == "noon":
            n = float(rest)
            if n != int(n):
                raise ValueError("n must be an integer")
            return Noon(int(n))
        if kind == "thermal":
            return Thermal(float(rest))
    except ValueError as exc:
        raise ValueError(f"bad state {spec!r}: {exc}") from None
    raise ValueError(f"bad state {spec!r}")


def format_state(state: InputState) -> str:
    if isinstance(state, Vacuum):
        return "vacuum"
    if isinstance(state, Coherent):
        return "coherent:{!r},{!r},{!r},{!r}".format(state.r1, state.theta1, state.r2, state.theta2)
    if isinstance(state, Noon):
        return f"noon:{state.n}"
    if isinstance(state, Thermal):
        return f"thermal:{state.beta!r}"
    raise TypeError(f"unsupported input state: {state!r}")
