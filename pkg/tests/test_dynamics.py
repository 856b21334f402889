import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptcavity import oracle
from ptcavity.dynamics import (
    Regime,
    SystemParams,
    classify_regime,
    eigenvalues,
    hyperbolic_pair,
    noise_integrals,
    omega,
    primitive_integrals,
    propagator,
)

rates = st.floats(0.1, 3.0)
times = st.floats(0.0, 5.0)


def _rk4_pair(s, t, n=4000):
    # c'' = s c with c(0)=1, c'(0)=0 and sh'' = s sh with sh(0)=0, sh'(0)=1
    def f(y):
        return np.array([y[1], s * y[0], y[3], s * y[2]])

    y = np.array([1.0, 0.0, 0.0, 1.0])
    h = t / n
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + h / 2 * k1)
        k3 = f(y + h / 2 * k2)
        k4 = f(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y[0], y[2]


@pytest.mark.parametrize(
    "gamma, expected",
    [(0.5, Regime.PTS), (1.1, Regime.PTSB), (1.0, Regime.EXCEPTIONAL_POINT)],
)
def test_classify_regime(gamma, expected):
    assert classify_regime(SystemParams(1.0, gamma)) is expected


def test_classify_regime_tolerance_band():
    assert classify_regime(SystemParams(1.0, 1.0 + 1e-14)) is Regime.EXCEPTIONAL_POINT
    assert classify_regime(SystemParams(1.0, 1.0 + 1e-9)) is Regime.PTSB


@pytest.mark.parametrize(
    "gamma, expected",
    [(0.0, (1.0, -1.0)), (1.0, (0.0, 0.0)), (1.25, (0.75j, -0.75j))],
)
def test_eigenvalues(gamma, expected):
    lam = eigenvalues(SystemParams(1.0, gamma))
    assert lam[0] == pytest.approx(expected[0], abs=1e-15)
    assert lam[1] == pytest.approx(expected[1], abs=1e-15)


@given(rates, rates)
def test_eigenvalues_match_matrix(g, gamma):
    k = 1j * SystemParams(g, gamma).generator  # K = i(-iK)
    numeric = np.linalg.eigvals(k)
    lam_p, lam_m = eigenvalues(SystemParams(g, gamma))
    assert lam_p + lam_m == 0
    scale = max(1.0, g, gamma)
    assert min(abs(numeric - lam_p)) < 1e-6 * scale


def test_system_params_validation():
    with pytest.raises(ValueError):
        SystemParams(1.0, -0.1)
    with pytest.raises(ValueError):
        SystemParams(-1.0, 0.1)


def test_hyperbolic_pair_ep():
    pair = hyperbolic_pair(0.0, 2.5)
    assert (pair.c, pair.sh) == (1.0, 2.5)


def test_hyperbolic_pair_pts_value():
    pair = hyperbolic_pair(-0.75, 1.0)
    w = math.sqrt(0.75)
    assert pair.c == pytest.approx(math.cos(w), rel=1e-15)
    assert pair.sh == pytest.approx(math.sin(w) / w, rel=1e-15)
    assert pair.c == pytest.approx(0.6479, abs=1e-4)
    assert pair.sh == pytest.approx(0.8796, abs=1e-4)
    c_ode, sh_ode = _rk4_pair(-0.75, 1.0)
    assert pair.c == pytest.approx(c_ode, rel=1e-10)
    assert pair.sh == pytest.approx(sh_ode, rel=1e-10)


@pytest.mark.parametrize("s", [2.0, -3.0, 1e-7, -1e-7])
def test_hyperbolic_pair_against_ode(s):
    pair = hyperbolic_pair(s, 1.5)
    c_ode, sh_ode = _rk4_pair(s, 1.5)
    assert pair.c == pytest.approx(c_ode, rel=1e-10)
    assert pair.sh == pytest.approx(sh_ode, rel=1e-10)


def test_hyperbolic_pair_series_branch_is_continuous():
    # straddle the series switch at |s t^2| = 1e-4
    for s in (0.99e-4, 1.01e-4, -0.99e-4, -1.01e-4):
        pair = hyperbolic_pair(s, 1.0)
        r = math.sqrt(abs(s))
        if s > 0:
            c, sh = math.cosh(r), math.sinh(r) / r
        else:
            c, sh = math.cos(r), math.sin(r) / r
        assert pair.c == pytest.approx(c, rel=1e-15)
        assert pair.sh == pytest.approx(sh, rel=1e-15)


def test_hyperbolic_pair_rejects_negative_time():
    with pytest.raises(ValueError):
        hyperbolic_pair(1.0, -0.1)


@given(st.floats(-9.0, 9.0), times)
def test_pythagorean_identity(s, t):
    pair = hyperbolic_pair(s, t)
    scale = max(1.0, pair.c**2 + abs(s) * pair.sh**2)
    assert abs(pair.c**2 - s * pair.sh**2 - 1.0) <= 1e-12 * scale


def test_propagator_at_exceptional_point():
    q = propagator(SystemParams(1.0, 1.0), 2.0).q
    np.testing.assert_allclose(q, [[3, -2j], [-2j, -1]], atol=1e-14)


def test_propagator_pts_value():
    q = propagator(SystemParams(1.0, 0.5), 1.0).q
    pair = hyperbolic_pair(-0.75, 1.0)
    assert q[0, 0] == pytest.approx(pair.c + 0.5 * pair.sh, rel=1e-15)
    assert q[0, 0].real == pytest.approx(1.0876, abs=2e-4)
    assert q[0, 1] == pytest.approx(-1j * pair.sh, rel=1e-15)
    np.testing.assert_allclose(q, oracle.expm_taylor(SystemParams(1.0, 0.5), 1.0).q, atol=1e-13)


@given(rates, rates)
def test_propagator_identity_at_zero(g, gamma):
    np.testing.assert_array_equal(propagator(SystemParams(g, gamma), 0.0).q, np.eye(2))


@given(rates, rates, times)
def test_propagator_structure(g, gamma, t):
    q = propagator(SystemParams(g, gamma), t).q
    assert q[0, 0].imag == 0 and q[1, 1].imag == 0
    assert q[0, 1].real == 0 and q[0, 1] == q[1, 0]
    scale = max(1.0, abs(q[0, 0] * q[1, 1]) + abs(q[0, 1]) ** 2)
    det = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
    assert abs(det - 1.0) <= 1e-12 * scale


@settings(max_examples=200)
@given(rates, rates, st.floats(0.0, 2.5), st.floats(0.0, 2.5))
def test_semigroup(g, gamma, t1, t2):
    params = SystemParams(g, gamma)
    joint = propagator(params, t1 + t2).q
    split = propagator(params, t1).q @ propagator(params, t2).q
    assert np.max(np.abs(split - joint)) <= 1e-10 * max(1.0, np.max(np.abs(joint)))


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_ep_continuity(t):
    at_ep = propagator(SystemParams(1.0, 1.0), t).q
    for gamma in (1.0 - 1e-6, 1.0 + 1e-6):
        np.testing.assert_allclose(propagator(SystemParams(1.0, gamma), t).q, at_ep, atol=1e-5)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.1])
def test_propagator_matches_taylor_oracle(gamma):
    params = SystemParams(1.0, gamma)
    np.testing.assert_allclose(
        propagator(params, 1.0).q, oracle.expm_taylor(params, 1.0).q, rtol=0, atol=1e-10
    )


def test_quoted_q_matrix_with_principal_root():
    # the hyperbolic form with complex Omega must agree in the PTS phase
    params = SystemParams(1.0, 0.5)
    w = omega(params)
    t = 1.7
    q11 = np.cosh(w * t) + params.gamma / w * np.sinh(w * t)
    q12 = -1j * params.g / w * np.sinh(w * t)
    q = propagator(params, t).q
    assert q[0, 0] == pytest.approx(q11, abs=1e-14)
    assert q[0, 1] == pytest.approx(q12, abs=1e-14)


def test_noise_integrals_zero_time():
    ni = noise_integrals(SystemParams(1.0, 0.5), 0.0)
    assert not ni.d.any() and not ni.acomm.any()


def test_noise_integrals_pts_values():
    ni = noise_integrals(SystemParams(1.0, 0.5), 1.0)
    i_cc, i_cs, i_ss = primitive_integrals(-0.75, 1.0)
    assert (i_cc, i_cs, i_ss) == pytest.approx((0.7849, 0.3868, 0.2868), abs=1e-4)
    # frozen from 20000-panel Simpson quadrature
    assert ni.d[1, 1].real == pytest.approx(0.286759933878324, rel=1e-12)
    assert ni.d[0, 0].real == pytest.approx(1.2434722125857318, rel=1e-12)
    assert ni.d[0, 1] == pytest.approx(-0.5302321464640585j, rel=1e-12)
    assert ni.d[1, 1] == ni.acomm[0, 0]


def test_noise_integrals_ep_exact():
    # Q11 = 1 + t, Q21 = -i t at g = gamma = 1
    ni = noise_integrals(SystemParams(1.0, 1.0), 2.0)
    assert ni.d[0, 0].real == pytest.approx(52 / 3, rel=1e-14)
    assert ni.d[1, 1].real == pytest.approx(16 / 3, rel=1e-14)
    assert ni.d[0, 1] == pytest.approx(-28j / 3, rel=1e-14)
    # Q22 = 1 - t, Q12 = -i t
    assert ni.acomm[1, 1].real == pytest.approx(4 / 3, rel=1e-14)


def test_iss_series_switch_continuous():
    # |s t^2| = 0.25 is the series/closed-form boundary
    for s in (0.2499, 0.2501, -0.2499, -0.2501):
        _, _, i_ss = primitive_integrals(s, 1.0)
        taus = np.linspace(0.0, 1.0, 4001)
        vals = np.array([hyperbolic_pair(s, x).sh ** 2 for x in taus])
        ref = float(np.dot(oracle.simpson_weights(4000, 1.0 / 4000), vals))
        assert i_ss == pytest.approx(ref, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(rates, rates, st.floats(0.05, 3.0))
def test_noise_integrals_hermitian_psd_and_match_quadrature(g, gamma, t):
    params = SystemParams(g, gamma)
    ni = noise_integrals(params, t)
    quad = oracle.quad_noise_integrals(params, t, 400)
    for mat, ref in ((ni.d, quad.d), (ni.acomm, quad.acomm)):
        np.testing.assert_allclose(mat, mat.conj().T, atol=0)
        assert np.min(np.linalg.eigvalsh(mat)) >= -1e-12 * max(1.0, np.max(np.abs(mat)))
        assert np.max(np.abs(mat - ref)) <= 1e-6 * max(1e-300, np.max(np.abs(ref)))


@given(rates, rates, st.floats(0.0, 4.0), st.floats(0.0, 1.0))
def test_noise_diagonals_nondecreasing(g, gamma, t, dt):
    params = SystemParams(g, gamma)
    a = noise_integrals(params, t)
    b = noise_integrals(params, t + dt)
    for i in range(2):
        assert b.d[i, i].real >= a.d[i, i].real * (1 - 1e-12)
        assert b.acomm[i, i].real >= a.acomm[i, i].real * (1 - 1e-12)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        propagator(SystemParams(1.0, 0.5), -1.0)
    with pytest.raises(ValueError):
        noise_integrals(SystemParams(1.0, 0.5), -1.0)


def test_docstring_examples():
    import doctest

    from ptcavity import dynamics

    assert doctest.testmod(dynamics).failed == 0
