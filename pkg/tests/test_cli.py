import csv
import io
import json
import math

import pytest

from table_data import ROWS
from transport_gates import config as cfgmod
from transport_gates.cli import EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY, main, run
from transport_gates.errors import ConfigError
from transport_gates.phasegate import winding_number


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def _write(tmp_path, body, name="run.toml"):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


def test_rotate_default():
    code, out = run(["rotate"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["command"] == "rotate"
    assert rep["results"]["speed_m_per_s"] == pytest.approx(25.0, rel=0.05)
    assert rep["results"]["truncation_infidelity"] < 1e-4
    assert len(rep["results"]["site_phases"]) == 4


def test_rotate_zero_angle(tmp_path):
    path = _write(tmp_path, "[rotate]\ntarget_angle_pi = 0.0\n")
    code, out = run(["rotate", "--config", path])
    assert code == EXIT_DOMAIN
    assert "theta_target" in out


@pytest.mark.parametrize("argv", [
    ["rotate"], ["gate", "design"], ["gate", "table"], ["gate", "trajectory", "--samples", "300"],
    ["washboard"], ["verify", "--samples", "10"], ["gate", "table", "--format", "json"],
])
def test_determinism(argv):
    a = run(argv)
    b = run(argv)
    c = run(argv + ["--threads", "4"])
    assert a == b == c
    assert a[0] == EXIT_OK


def test_table_matches_published():
    code, out = run(["gate", "table"])
    rows = _csv(out)
    assert len(rows) == 19
    for got, ref in zip(rows, ROWS):
        assert int(got["n"]) == ref[0]
        assert abs(float(got["gamma_deg"]) - ref[1]) <= 0.1
        assert abs(float(got["eta"]) - ref[2]) <= 0.001
        assert float(got["v_m_per_s"]) == pytest.approx(ref[3], rel=0.02)
        assert float(got["tau_us"]) == pytest.approx(ref[4], rel=0.02)
        assert float(got["omega_down_over_2pi_MHz"]) == pytest.approx(ref[6], rel=0.02)


def test_table_empty(tmp_path):
    path = _write(tmp_path, "[gate]\nn = []\n")
    code, out = run(["gate", "table", "--config", path])
    assert code == EXIT_OK
    assert out.strip().split(",")[0] == "n"
    assert len(out.strip().splitlines()) == 1


def test_table_row_error(tmp_path):
    path = _write(tmp_path, "[gate]\nn = [44, 46, 48]\n")
    rows = _csv(run(["gate", "table", "--config", path])[1])
    assert rows[0]["error"] == "" and rows[1]["error"] == ""
    assert rows[2]["error"].startswith("OutOfRange")
    assert rows[2]["eta"] == ""


def test_table_digits():
    rows = _csv(run(["gate", "table", "--digits", "4"])[1])
    assert rows[0]["gamma_deg"] == "77.64"


def test_trajectory_final(tmp_path):
    rows = _csv(run(["gate", "trajectory"])[1])
    assert len(rows) == 2000
    assert float(rows[-1]["abs_alpha_sq_ud"]) == pytest.approx(1e-4, rel=0.05)
    assert float(rows[-1]["phi_rad_ud"]) == pytest.approx(math.pi / 2, rel=1e-3)


def test_trajectory_two_samples():
    assert len(_csv(run(["gate", "trajectory", "--samples", "2"])[1])) == 2


def test_trajectory_winding(tmp_path):
    counts = []
    for p in (2.69, 4.11):
        path = _write(tmp_path, f"[gate]\np = {p}\nwindow_tau = 3.0\n", f"p{p}.toml")
        rows = _csv(run(["gate", "trajectory", "--config", path])[1])
        counts.append(winding_number([complex(float(r["re_alpha_ud"]), float(r["im_alpha_ud"])) for r in rows]))
    assert counts[1] > counts[0] + 1


def test_washboard_report():
    rep = json.loads(run(["washboard"])[1])["results"]
    assert rep["gate_rabi_hz"] == pytest.approx(73.5e3, rel=0.01)
    assert rep["omega_w_hz"] == pytest.approx(4e6, rel=0.005)
    assert rep["residual_z_phase_turns"] == pytest.approx(15.9, rel=0.05)


def test_gate_design_report():
    rep = json.loads(run(["gate", "design"])[1])
    assert rep["results"]["logic_phase_rad"] == pytest.approx(-math.pi, abs=1e-9)
    assert rep["results"]["lamb_dicke_score"] < 0.3
    assert any("delta/omega_com" in w for w in rep["warnings"])


def test_verify_passes_and_fault():
    code, out = run(["verify", "--samples", "20"])
    assert code == EXIT_OK and json.loads(out)["results"]["pass"]
    code, out = run(["verify", "--samples", "20", "--inject-fault"])
    assert code == EXIT_VERIFY
    assert not json.loads(out)["results"]["pass"]


def test_verify_square(tmp_path):
    path = _write(tmp_path, '[verify]\nmode = "square"\n')
    code, out = run(["verify", "--config", path, "--samples", "30"])
    assert code == EXIT_OK
    assert all(r["max_residual"] <= 1e-10 for r in json.loads(out)["results"]["residuals"])


def test_out_file(tmp_path):
    target = tmp_path / "t.csv"
    code, out = run(["gate", "table", "--out", str(target)])
    assert code == EXIT_OK and out == ""
    assert target.read_text() == run(["gate", "table"])[1]


def test_config_unknown_key(tmp_path):
    path = _write(tmp_path, "[gate]\npp = 3\n")
    code, out = run(["gate", "table", "--config", path])
    assert code == EXIT_CONFIG
    assert "gate.pp" in out


def test_config_syntax_error_reports_line(tmp_path):
    path = _write(tmp_path, "[gate]\np = 3.48\nratio = = 1\n")
    code, out = run(["gate", "table", "--config", path])
    assert code == EXIT_CONFIG
    assert "line 3" in out


def test_config_bad_values(tmp_path):
    for body in ("[trap]\ncom_frequency_hz = -1.0\n", "[gate]\nsamples = 2.5\n",
                 "[bogus]\nx = 1\n", '[verify]\nmode = "x"\n', "[gate]\nallow_odd = 1\n"):
        assert run(["gate", "table", "--config", _write(tmp_path, body)])[0] == EXIT_CONFIG


def test_config_missing_file(tmp_path):
    assert run(["rotate", "--config", str(tmp_path / "none.toml")])[0] == EXIT_CONFIG


def test_custom_species(tmp_path):
    body = '[species]\nname = "Mg25"\nmass_u = 24.985837\nqubit_frequency_hz = 1.789e9\nraman_wavelength_m = 280e-9\n'
    cfg = cfgmod.load(_write(tmp_path, body))
    assert cfg.species_obj().name == "Mg25"
    with pytest.raises(ConfigError):
        cfgmod.load(_write(tmp_path, '[species]\nname = "Mg25"\n')).species_obj()


def test_csv_rejected_for_json_commands():
    assert run(["washboard", "--format", "csv"])[0] == EXIT_CONFIG


def test_main_exit_code(capsys):
    assert main(["washboard"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["command"] == "washboard"
