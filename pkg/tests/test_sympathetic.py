import math

import numpy as np
import pytest

from transport_gates.errors import DomainError
from transport_gates.phasegate import drive_coefficients, total_logic_phase
from transport_gates.physics import BE9, TWO_PI
from transport_gates.sympathetic import (
    ModeSpec,
    generalized_coefficients,
    generalized_logic_phase,
    generalized_logic_phase_from_coefficients,
    load_modes,
    mode_suitability,
    save_modes,
    spacing_condition,
    stretch_mode,
)

S = 1 / math.sqrt(2)


def test_two_ion_limit_coefficients():
    a = generalized_coefficients(stretch_mode(1e7), 1.3, -0.4, 0.8)
    b = drive_coefficients(1.3, -0.4, 0.8)
    assert a == b


def test_two_ion_limit_phase_bitwise():
    args = (1.3e6, -0.4e6, 0.2, 2e6, 1e-6, 0.3)
    assert generalized_logic_phase(stretch_mode(1e7), *args) == total_logic_phase(*args)


def test_no_second_ion():
    m = ModeSpec(1e7, 0.6, 0.0, (0.8,))
    c = generalized_coefficients(m, 2.0, -1.0, 0.4)
    assert c.A_ud == pytest.approx(0.6 * np.exp(-0.4j) * 2.0)
    assert generalized_logic_phase(m, 2.0, -1.0, 0.1, 1e6, 1e-6, 0.0) == 0.0


def test_four_ion_stretch_type():
    q, r = 0.3, math.sqrt(0.5 - 0.09)
    m = ModeSpec(1e7, q, -q, (r, -r))
    c = generalized_coefficients(m, 1.7, 0.4, 0.9)
    assert c.A_uu == pytest.approx(-2j * q * math.sin(0.9) * 1.7, abs=1e-15)


def test_two_paths_random_modes():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        m = ModeSpec(rng.uniform(1e6, 5e7), v[0], v[1], tuple(v[2:]))
        ou, od = rng.uniform(-5e6, 5e6, 2)
        tau = rng.uniform(1e-7, 1e-5)
        args = (ou, od, rng.uniform(0.01, 0.4), rng.uniform(0.05, 6) * math.sqrt(2) / tau, tau, rng.uniform(-4, 4))
        a = generalized_logic_phase(m, *args)
        b = generalized_logic_phase_from_coefficients(m, *args)
        scale = abs(generalized_logic_phase(ModeSpec(1e7, S, S), *args[:-1], 0.0)) * (ou ** 2 + od ** 2) \
            / max((ou - od) ** 2, 1e-300)
        assert abs(a - b) <= 1e-10 * max(abs(a), scale)


def test_swap_and_sign_symmetry():
    m = ModeSpec(1e7, 0.5, -0.3)
    sw = ModeSpec(1e7, -0.3, 0.5)
    neg = ModeSpec(1e7, -0.5, 0.3)
    c, cs = generalized_coefficients(m, 1.0, 0.2, 0.6), generalized_coefficients(sw, 1.0, 0.2, 0.6)
    args = (1.0e6, 0.2e6, 0.1, 2e6, 1e-6, 0.6)
    assert abs(c.A_ud) == pytest.approx(abs(cs.A_du))
    assert generalized_logic_phase(sw, *args) == generalized_logic_phase(m, *args)
    assert generalized_logic_phase(neg, *args) == generalized_logic_phase(m, *args)


def test_suitability():
    dk = 2 * TWO_PI / 313e-9
    w = TWO_PI * 4e6
    com = ModeSpec(w, S, S)
    st = ModeSpec(math.sqrt(3) * w, S, -S)
    assert mode_suitability(com, dk, BE9.mass) / mode_suitability(st, dk, BE9.mass) == pytest.approx(math.sqrt(3))
    assert mode_suitability(ModeSpec(w, 0.0, 1.0), dk, BE9.mass) == 0.0
    best = max(abs(math.cos(a) * math.sin(a)) for a in np.linspace(0, math.pi, 1001))
    assert best == pytest.approx(0.5, abs=1e-6)


def test_normalisation_check():
    with pytest.raises(DomainError):
        ModeSpec(1e7, 0.8, 0.8)
    ModeSpec(1e7, S, S + 1e-10)


def test_spacing_condition():
    n, resid, ok = spacing_condition(3.0, 4 * math.pi / 3.0)
    assert n == 4 and ok
    assert not spacing_condition(3.0, 4.1 * math.pi / 3.0)[2]


def test_mode_file_round_trip(tmp_path):
    modes = [ModeSpec(TWO_PI * 4e6, S, S), ModeSpec(TWO_PI * 6.9e6, 0.5, -0.5, (0.5, -0.5))]
    path = tmp_path / "modes.csv"
    save_modes(path, modes)
    back = load_modes(path)
    assert [m.v1 for m in back] == [m.v1 for m in modes]
    assert back[1].refrigerator_amplitudes == (0.5, -0.5)
    assert back[0].omega == pytest.approx(modes[0].omega, rel=1e-15)


def test_mode_file_bad_header(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("f,a,b\n1,0,0\n")
    with pytest.raises(DomainError):
        load_modes(p)
