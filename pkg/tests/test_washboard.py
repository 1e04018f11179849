import dataclasses
import math

import numpy as np
import pytest

from transport_gates.errors import ExpansionInvalid
from transport_gates.physics import MU_B, HBAR, TWO_PI
from transport_gates.washboard import (
    GAUSS,
    WashboardSpec,
    adiabaticity_margin,
    dc_offset,
    field_total,
    gate_duration,
    gate_rabi,
    harmonic_decomposition,
    magnetic_lamb_dicke,
    report,
    residual_z_phase,
)


@pytest.fixture
def spec():
    return WashboardSpec.from_gauss(120, 20, 20e-6, 80)


def test_no_washboard(spec):
    flat = dataclasses.replace(spec, Bw=0.0)
    t = np.linspace(0, 1e-6, 50)
    assert np.all(field_total(flat, t) == flat.B0)
    assert harmonic_decomposition(flat).residual == 0.0
    assert residual_z_phase(flat, 1e-5)[0] == 0.0
    assert adiabaticity_margin(flat) == 0.0


def test_field_at_zero(spec):
    assert field_total(spec, 0.0) == spec.B0 - spec.Bw


def test_time_average(spec):
    t = np.arange(100000) / 100000 * TWO_PI / spec.omega_w
    excess = (np.mean(field_total(spec, t)) - spec.B0) / GAUSS
    assert excess == pytest.approx(0.837, rel=0.01)
    assert dc_offset(spec) / GAUSS == pytest.approx(0.837, rel=0.01)


def test_decomposition(spec):
    dec = harmonic_decomposition(spec)
    assert dec.omega_w / TWO_PI == pytest.approx(4e6, rel=1e-12)
    assert dec.B_dc == pytest.approx(spec.B0 * (1 + 0.25 * (spec.Bw / spec.B0) ** 2))
    assert dec.B_osc == spec.Bw


def test_residual_is_second_harmonic(spec):
    # the dropped term is (Bw^2 / 4 B0) cos(2 w t) plus higher orders
    dec = harmonic_decomposition(spec)
    lead = spec.Bw ** 2 / (4 * spec.B0)
    assert dec.residual == pytest.approx(lead, rel=spec.Bw / spec.B0)
    assert dec.residual / spec.Bw < (spec.Bw / spec.B0) ** 2 * 2


def test_residual_shrinks(spec):
    r = [harmonic_decomposition(dataclasses.replace(spec, Bw=b * GAUSS)).residual for b in (20, 10, 5, 1)]
    assert np.all(np.diff(r) < 0)


def test_expansion_invalid(spec):
    with pytest.raises(ExpansionInvalid):
        harmonic_decomposition(dataclasses.replace(spec, Bw=spec.B0))


def test_gate_rabi(spec, ctx):
    assert gate_rabi(spec, ctx) / TWO_PI == pytest.approx(73.5e3, rel=0.01)
    assert gate_duration(spec, ctx) == pytest.approx(6.8e-6, rel=0.02)
    half = dataclasses.replace(spec, d_m=spec.d_m / 2)
    assert gate_rabi(half, ctx) == pytest.approx(2 * gate_rabi(spec, ctx), rel=1e-15)


def test_lamb_dicke(spec, ctx):
    eta = magnetic_lamb_dicke(spec, ctx)
    assert eta == pytest.approx(2.63e-3, rel=0.005)
    assert gate_rabi(spec, ctx) == pytest.approx(eta * MU_B * spec.Bw / HBAR, rel=1e-15)


def test_residual_phase(spec, ctx):
    raw, wrapped = residual_z_phase(spec, gate_duration(spec, ctx))
    assert raw / TWO_PI == pytest.approx(15.9, rel=0.05)
    assert 0 <= wrapped < TWO_PI
    assert residual_z_phase(spec, gate_duration(spec, ctx) / 2)[0] == pytest.approx(raw / 2, rel=1e-15)


def test_adiabatic(spec):
    m = adiabaticity_margin(spec)
    assert 0 < m < 0.05
    fast = dataclasses.replace(spec, v_w=2 * spec.v_w)
    assert adiabaticity_margin(fast) == pytest.approx(2 * m, rel=1e-12)


def test_continuity(spec, ctx):
    base = report(spec, ctx)
    bumped = report(dataclasses.replace(spec, Bw=spec.Bw * (1 + 1e-7)), ctx)
    for key in ("gate_rabi_rad_s", "dc_offset_t", "adiabaticity_margin", "residual_z_phase_rad"):
        assert bumped[key] == pytest.approx(base[key], rel=1e-6)


def test_report_note(spec, ctx):
    assert "spin echo" in report(spec, ctx)["note"]
