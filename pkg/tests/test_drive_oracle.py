import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transport_gates.drive_oracle import (
    Envelope,
    fourier_displacement,
    integrate_displacement,
    square_pulse_closed_form,
)
from transport_gates.errors import DomainError, ToleranceNotMet
from transport_gates.phasegate import alpha_infinity, alpha_of_t, logic_phase_coeff


def _draw(rng):
    tau = rng.uniform(0.3e-6, 40e-6)
    return (rng.uniform(0.1, 10) * 1e6, rng.uniform(0.01, 0.4),
            rng.uniform(0.5, 4.5) * math.sqrt(2) / tau, tau)


def test_gaussian_matches_closed_forms():
    rng = np.random.default_rng(10)
    for _ in range(100):
        A0, eta, delta, tau = _draw(rng)
        res = integrate_displacement(Envelope.gaussian(A0, eta, delta, tau), tol=1e-12,
                                     times=np.linspace(-4, 4, 9) * tau)
        closed = alpha_of_t(A0, eta, delta, tau, res.t)
        peak = np.max(np.abs(closed))
        assert np.max(np.abs(res.alpha - closed)) < 1e-9 * peak
        assert abs(res.alpha_final - alpha_infinity(A0, eta, delta, tau)) < 1e-9 * peak
        phi = logic_phase_coeff(A0, eta, delta, tau)
        assert abs(res.phi_final - phi) < 1e-8 * phi


def test_square_pulse():
    A0, eta, delta, T = 3e5, 0.2, 2.3e6, 7e-6
    res = integrate_displacement(Envelope.square(A0, eta, delta, T), tol=1e-13)
    a, ph = square_pulse_closed_form(A0, eta, delta, T)
    assert abs(res.alpha_final - a) < 1e-10 * abs(a)
    assert abs(res.phi_final - ph) < 1e-10 * abs(ph)
    # intermediate times as well
    mids = np.linspace(0.5e-6, 6.5e-6, 7)
    res = integrate_displacement(Envelope.square(A0, eta, delta, T), tol=1e-13, times=mids)
    for t in mids:
        assert abs(res.alpha_at(t) - square_pulse_closed_form(A0, eta, delta, t)[0]) < 1e-10 * abs(a)


def test_zero_drive():
    res = integrate_displacement(Envelope.gaussian(0.0, 0.1, 1e6, 1e-6))
    assert np.all(res.alpha == 0) and np.all(res.phi == 0)


def test_result_invariants():
    res = integrate_displacement(Envelope.gaussian(1e6, 0.1, 2e6, 1e-6))
    assert res.alpha[0] == 0 and res.phi[0] == 0
    assert res.error_estimate >= 0
    assert np.all(np.diff(res.t) > 0)


def test_phase_additivity():
    env = Envelope.gaussian(2e6, 0.15, 3e6, 1e-6)
    t0, t1, t2 = -8e-6, 0.4e-6, 8e-6
    full = integrate_displacement(env, t0, t2, tol=1e-13, times=[t1])
    left = integrate_displacement(env, t0, t1, tol=1e-13)
    right = integrate_displacement(env, t1, t2, tol=1e-13)
    a1 = left.alpha_final
    corr = float(np.imag(np.conj(a1) * right.alpha_final))
    assert full.phi_final == pytest.approx(left.phi_final + right.phi_final + corr, abs=1e-12)


def test_rescaling_invariance():
    A0, eta, delta, tau, s = 1.3e6, 0.1, 2.5e6, 1.1e-6, 7.0
    a = integrate_displacement(Envelope.gaussian(A0, eta, delta, tau), tol=1e-13)
    b = integrate_displacement(Envelope.gaussian(s * A0, eta, delta * s, tau / s), tol=1e-13)
    assert abs(a.alpha_final - b.alpha_final) < 1e-12
    assert a.phi_final == pytest.approx(b.phi_final, rel=1e-10)


def test_fourier_gaussian():
    A0, eta, delta, tau = 1e6, 0.1, 2e6, 1e-6
    assert abs(fourier_displacement(Envelope.gaussian(A0, eta, delta, tau)) - alpha_infinity(A0, eta, delta, tau)) < 1e-12


def test_fourier_zero_detuning_area():
    A0, eta, T = 2e5, 0.3, 4e-6
    assert fourier_displacement(Envelope.square(A0, eta, 0.0, T)) == pytest.approx(eta * A0 * T, rel=1e-13)


def test_triangle_spectral_zero():
    W = 2e-6
    env = Envelope.sampled([-W, 0.0, W], [0.0, 1.0, 0.0], eta=0.1, delta=2 * math.pi / W,
                           A0=1e6, interpolation="linear")
    assert abs(fourier_displacement(env, tol=1e-13)) < 1e-12
    assert abs(integrate_displacement(env, tol=1e-13).alpha_final) < 1e-12


def test_fourier_agrees_with_time_ordered():
    t = np.linspace(-3e-6, 3e-6, 41)
    env = Envelope.sampled(t, np.exp(-(t / 1e-6) ** 4), eta=0.1, delta=3e6, A0=1e6)
    res = integrate_displacement(env, tol=1e-12)
    assert abs(fourier_displacement(env) - res.alpha_final) < 2e-12


def test_sampled_cubic_error_folded():
    t = np.linspace(-3e-6, 3e-6, 9)
    env = Envelope.sampled(t, np.exp(-(t / 1e-6) ** 2), eta=0.1, delta=3e6, A0=1e6)
    res = integrate_displacement(env, tol=1e-12)
    assert res.error_estimate >= env.interpolation_error() > 0


def test_sampled_validation():
    with pytest.raises(DomainError):
        Envelope.sampled([0.0, 0.0, 1.0], [0, 1, 0], 0.1, 1.0)
    with pytest.raises(DomainError):
        Envelope.sampled([0.0, 1.0], [0, math.nan], 0.1, 1.0)


def test_tolerance_not_met_attaches_result():
    with pytest.raises(ToleranceNotMet) as info:
        integrate_displacement(Envelope.gaussian(1e6, 0.1, 2e6, 1e-6), tol=1e-30, max_panels=5)
    assert info.value.result is not None


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0.2, 10.0), st.floats(0.1, 3.0))
def test_gaussian_property(p, A0_mhz, tau_us):
    tau = tau_us * 1e-6
    A0 = A0_mhz * 1e6
    delta = p * math.sqrt(2) / tau
    res = integrate_displacement(Envelope.gaussian(A0, 0.1, delta, tau), tol=1e-12)
    assert res.phi_final == pytest.approx(logic_phase_coeff(A0, 0.1, delta, tau), rel=1e-8)
