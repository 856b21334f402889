import math

import numpy as np
import pytest

from ptcavity import oracle
from ptcavity.dynamics import SystemParams, noise_integrals, propagator
from ptcavity.moments import propagate
from ptcavity.states import Coherent, Noon, Thermal, Vacuum, initial_moments
from ptcavity.witnesses import a, ad


def test_pack_roundtrip():
    m = initial_moments(Coherent(1.0, 0.3, 0.5, -1.0))
    back = oracle.unpack(oracle.pack(m), 0.0)
    for x, y in ((m.mu, back.mu), (m.nmat, back.nmat), (m.mmat, back.mmat)):
        np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("gamma", [0.3, 0.9])
def test_ode_uncoupled_vacuum(gamma):
    m = oracle.ode_moments(SystemParams(0.0, gamma), initial_moments(Vacuum()), 2.0, 1e-2)
    assert m.nmat[0, 0].real == pytest.approx(math.expm1(2 * gamma * 2.0), rel=1e-8)
    assert m.nmat[1, 1] == 0


def test_ode_zero_time_is_identity():
    m0 = initial_moments(Thermal(1.0))
    m = oracle.ode_moments(SystemParams(1.0, 0.5), m0, 0.0, 1e-3)
    np.testing.assert_array_equal(m.nmat, m0.nmat)


def test_ode_vacuum_spot_values():
    params = SystemParams(1.0, 0.5)
    m = oracle.ode_moments(params, initial_moments(Vacuum()), 1.0, 1e-3)
    assert m.nmat[0, 0].real == pytest.approx(1.2434, abs=1e-4)
    assert m.nmat[1, 1].real == pytest.approx(0.2868, abs=1e-4)
    exact = propagate(params, initial_moments(Vacuum()), 1.0)
    assert np.max(np.abs(m.nmat - exact.nmat)) <= 1e-6 * np.max(np.abs(exact.nmat))


def test_ode_partial_final_step():
    # t not a multiple of dt; the shortened last step must land on t
    params = SystemParams(1.0, 0.7)
    m0 = initial_moments(Noon(1))
    m = oracle.ode_moments(params, m0, 1.2345, 1e-3)
    exact = propagate(params, m0, 1.2345)
    assert m.t == 1.2345
    assert np.max(np.abs(m.nmat - exact.nmat)) <= 1e-10 * np.max(np.abs(exact.nmat))


@pytest.mark.parametrize("dt", [0.0, -1e-3])
def test_ode_rejects_step(dt):
    with pytest.raises(ValueError):
        oracle.ode_moments(SystemParams(1.0, 0.5), initial_moments(Vacuum()), 1.0, dt)


def test_simpson_weights_integrate_cubic_exactly():
    w = oracle.simpson_weights(4, 0.5)
    x = np.linspace(0, 2, 5)
    assert np.dot(w, x**3) == pytest.approx(4.0, rel=1e-15)


def test_quadrature_zero_time():
    ni = oracle.quad_noise_integrals(SystemParams(1.0, 0.5), 0.0, 10)
    assert not ni.d.any() and not ni.acomm.any()


def test_quadrature_spot_and_hermitian():
    params = SystemParams(1.0, 0.5)
    quad = oracle.quad_noise_integrals(params, 1.0, 2000)
    assert quad.d[1, 1].real == pytest.approx(noise_integrals(params, 1.0).d[1, 1].real, abs=1e-9)
    assert quad.d[1, 1].real == pytest.approx(0.2868, abs=1e-4)
    for mat in (quad.d, quad.acomm):
        assert np.max(np.abs(mat - mat.conj().T)) < 1e-13


def test_quadrature_fourth_order():
    params, t = SystemParams(1.0, 1.3), 2.0
    exact = noise_integrals(params, t).d
    e1 = np.max(np.abs(oracle.quad_noise_integrals(params, t, 40).d - exact))
    e2 = np.max(np.abs(oracle.quad_noise_integrals(params, t, 80).d - exact))
    assert 8 <= e1 / e2 <= 32


@pytest.mark.parametrize("panels", [0, 1, 3, 101])
def test_quadrature_rejects_panels(panels):
    with pytest.raises(ValueError):
        oracle.quad_noise_integrals(SystemParams(1.0, 0.5), 1.0, panels)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.1])
def test_expm_three_regimes(gamma):
    params = SystemParams(1.0, gamma)
    assert np.max(np.abs(oracle.expm_taylor(params, 1.0).q - propagator(params, 1.0).q)) < 1e-10


def test_expm_large_argument_uses_squaring():
    params = SystemParams(2.0, 2.5)
    q = propagator(params, 4.0).q
    rel = np.max(np.abs(oracle.expm_taylor(params, 4.0).q - q)) / np.max(np.abs(q))
    assert rel < 1e-10


def test_expm_rejects_low_degree():
    with pytest.raises(ValueError):
        oracle.expm_taylor(SystemParams(1.0, 0.5), 1.0, degree=6)


def test_fock_examples():
    assert oracle.fock_expectation(Noon(1), [ad(1), a(2)]) == pytest.approx(0.5, abs=1e-15)
    coh = Coherent(1.0, 0.0, 1.0, 0.0)
    assert oracle.fock_expectation(coh, [ad(1), a(1)], dim=20) == pytest.approx(1.0, abs=1e-10)
    th = oracle.fock_expectation(Thermal(1.0), [ad(1), a(1)])
    assert th == pytest.approx(1 / (math.e - 1), abs=1e-10)


def test_fock_commutator():
    # [a, a^dag] = 1 must hold on padded kets even at the cutoff
    for state in (Coherent(1.5, 0.2, 0.4, 0.0), Noon(2), Thermal(0.5)):
        diff = (oracle.fock_expectation(state, [a(1), ad(1)])
                - oracle.fock_expectation(state, [ad(1), a(1)]))
        assert diff == pytest.approx(1.0, abs=1e-10)


def test_fock_insufficient_truncation():
    with pytest.raises(oracle.InsufficientTruncation):
        oracle.fock_expectation(Coherent(2.0, 0.0, 2.0, 0.0), [a(1)], dim=10)
    with pytest.raises(oracle.InsufficientTruncation):
        oracle.fock_expectation(Thermal(0.5), [a(1)], dim=10)
    with pytest.raises(oracle.InsufficientTruncation):
        oracle.fock_expectation(Noon(9), [a(1)], dim=8)


def test_fock_argument_checks():
    with pytest.raises(ValueError):
        oracle.fock_expectation(Vacuum(), [a(1)], dim=4)
    with pytest.raises(ValueError):
        oracle.fock_expectation(Vacuum(), [])
    with pytest.raises(ValueError):
        oracle.fock_expectation(Vacuum(), [a(1)] * 5)


def test_default_dims():
    assert oracle.default_dim(Vacuum()) == 8
    assert oracle.default_dim(Noon(3)) == 8
    assert oracle.default_dim(Noon(12)) == 13
    assert oracle.default_dim(Coherent(1.0, 0, 1.0, 0)) == 20
    dim = oracle.default_dim(Thermal(1.0))
    assert 2 * math.exp(-dim) < oracle.TAIL_BOUND <= 2 * math.exp(-(dim - 1))
