"""Gaussian-moment simulator for a PT-symmetric pair of gain and loss cavities."""

from .dynamics import (
    HyperbolicPair,
    NoiseIntegrals,
    Propagator,
    Regime,
    SystemParams,
    classify_regime,
    eigenvalues,
    hyperbolic_pair,
    noise_integrals,
    propagator,
)
from .kernels import BACKEND
from .moments import commutator_defect, propagate
from .states import (
    Coherent,
    InputState,
    MomentState,
    Noon,
    Thermal,
    Vacuum,
    initial_moments,
    parse_state,
)
from .witnesses import (
    OperatorSpec,
    WitnessReport,
    ZenoValues,
    antibunching_witness,
    difference_squeezing,
    fourth_moment_decoupled,
    photon_numbers,
    sum_squeezing,
    two_op_expectation,
    witness_report,
    zeno_parameter,
)

__version__ = "0.1.0"
