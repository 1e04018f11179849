"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 domain error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import config as cfgmod
from . import drive_oracle as oracle
from . import phasegate as pg
from . import rotations as rot
from . import washboard as wb
from .beams import envelope
from .errors import ConfigError, DomainError, ToleranceNotMet, TransportGateError
from .physics import TWO_PI

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

MHZ = 1e6


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _report(command, parameters, results, warnings=()):
    return {
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "results": results,
        "warnings": list(warnings),
    }


def _dump_json(report):
    return json.dumps(_jsonable(report), indent=2) + "\n"


def _fmt(x, digits):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), f".{digits}g")


def _dump_csv(header, rows, digits):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x, digits) for x in row])
    return buf.getvalue()


def _common_params(cfg):
    ctx = cfg.trap_context()
    return {
        "species": ctx.species.to_dict(),
        "com_frequency_hz": cfg.trap.com_frequency_hz,
        "stretch_frequency_hz": ctx.omega_str / TWO_PI,
        "ion_spacing_m": ctx.d,
        "waist_m": cfg.beam.waist_m,
        "wavelength_m": cfg.wavelength(),
    }


# -- commands -----------------------------------------------------------------

def cmd_rotate(cfg, args):
    r = cfg.rotate
    beam = cfg.rotate_beam()
    omega = r.rabi_frequency_hz * TWO_PI
    theta = r.target_angle_pi * math.pi
    v = rot.solve_velocity(beam, omega, theta)
    env = envelope(beam, v, omega, r.start_offset_waists * beam.waist)
    rel, infid = rot.truncation_error(r.start_offset_waists * beam.waist, beam)
    species = cfg.species_obj()
    sites = [{"path_length_m": s, "laser_phase_rad": rot.site_phase(s, species)}
             for s in r.path_lengths_m]
    params = dict(_common_params(cfg), rabi_frequency_hz=r.rabi_frequency_hz,
                  target_angle_rad=theta, angle_rad=beam.angle,
                  start_offset_waists=r.start_offset_waists)
    results = {
        "speed_m_per_s": v,
        "tau_s": env.tau,
        "pulse_area_rad": rot.pulse_area(env),
        "bloch_angle_rad": rot.rotation_angle(env),
        "bloch_angle_truncated_rad": rot.rotation_angle(env, env.start_time),
        "truncation_relative_error": rel,
        "truncation_infidelity": infid,
        "transit_time_ratio": rot.transit_time_ratio(r.start_offset_waists)
        if r.start_offset_waists > 0 else 0.0,
        "hyperfine_wavelength_m": species.hyperfine_wavelength,
        "site_phases": sites,
    }
    return _report("rotate", params, results)


def _design_dict(d):
    return {
        "n": d.n,
        "gamma_rad": d.gamma,
        "gamma_deg": math.degrees(d.gamma),
        "eta": d.eta,
        "speed_m_per_s": d.speed,
        "tau_s": d.tau,
        "tau_convention": d.tau_convention,
        "tau_text_s": d.tau_text,
        "delta_rad_s": d.delta,
        "delta_over_2pi_hz": d.delta / TWO_PI,
        "delta0_over_2pi_hz": d.delta0 / TWO_PI,
        "omega_down_over_2pi_hz": d.omega_down / TWO_PI,
        "omega_up_over_2pi_hz": d.omega_up / TWO_PI,
        "p": d.p,
        "epsilon_bound": d.epsilon_bound,
        "delta_over_omega_com": d.delta_over_com,
        "transit_time_s": d.transit_time,
    }


def _gate_params(cfg):
    g = cfg.gate
    return dict(_common_params(cfg), p=g.p, ratio=g.ratio, allow_odd=g.allow_odd)


def cmd_gate_design(cfg, args):
    g = cfg.gate
    ctx = cfg.trap_context()
    d = pg.design_row(ctx, cfg.gate_beam(), g.p, g.ratio, g.design_n, g.allow_odd, g.cutoff_waists)
    traj = pg.designed_trajectory(d.p, (-g.window_tau, g.window_tau), g.samples)
    ld = pg.lamb_dicke_validity(d.eta, traj)
    warnings = []
    if d.delta_over_com > 0.1:
        warnings.append(f"delta/omega_com = {d.delta_over_com:.3g} is not small")
    if ld >= g.lamb_dicke_threshold:
        warnings.append(f"Lamb-Dicke score {ld:.3g} >= {g.lamb_dicke_threshold}")
    results = _design_dict(d)
    results["logic_phase_rad"] = pg.total_logic_phase(
        d.omega_up, d.omega_down, d.eta, d.delta, d.tau, d.n * math.pi / 2)
    results["lamb_dicke_score"] = ld
    results["heating_per_revolution"] = pg.heating_robustness(g.heating_rate_quanta_per_s, d.delta)
    return _report("gate design", dict(_gate_params(cfg), n=g.design_n), results, warnings)


TABLE_HEADER = ["n", "gamma_deg", "eta", "v_m_per_s", "tau_us", "delta_over_2pi_MHz",
                "omega_down_over_2pi_MHz", "epsilon_bound", "error"]


def _table_rows(cfg, threads):
    g = cfg.gate
    ctx = cfg.trap_context()
    beam = cfg.gate_beam()

    def one(n):
        try:
            if n != int(n):
                raise DomainError(f"n = {n} is not an integer")
            return pg.design_row(ctx, beam, g.p, g.ratio, int(n), g.allow_odd, g.cutoff_waists)
        except DomainError as exc:
            return exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, g.n))  # map keeps input order
    return [one(n) for n in g.n]


def cmd_gate_table(cfg, args):
    designs = _table_rows(cfg, args.threads)
    if args.format == "json":
        rows = [{"n": n, "error": f"{type(d).__name__}: {d}"} if isinstance(d, Exception)
                else _design_dict(d) for n, d in zip(cfg.gate.n, designs)]
        return _dump_json(_report("gate table", _gate_params(cfg), {"rows": rows}))
    rows = []
    for n, d in zip(cfg.gate.n, designs):
        if isinstance(d, Exception):
            rows.append([_fmt(n, 17)] + [""] * 7 + [f"{type(d).__name__}: {d}"])
        else:
            rows.append([d.n, math.degrees(d.gamma), d.eta, d.speed, d.tau * 1e6,
                         d.delta / TWO_PI / MHZ, d.omega_down / TWO_PI / MHZ, d.epsilon_bound, ""])
    return _dump_csv(TABLE_HEADER, rows, args.digits)


STATES = ("uu", "ud", "du", "dd")
TRAJECTORY_HEADER = ["t_over_tau"] + [
    f"{col}_{s}" for s in STATES for col in ("re_alpha", "im_alpha", "abs_alpha_sq", "phi_rad")]


def cmd_gate_trajectory(cfg, args):
    g = cfg.gate
    traj = pg.designed_trajectory(g.p, (-g.window_tau, g.window_tau), g.samples)
    if args.format == "json":
        results = {
            "phi_L_rad": traj.phi_L,
            "alpha_final": traj.alpha_final,
            "epsilon_bound": pg.fidelity_bound(g.p),
            "winding_number": pg.winding_number(traj.alpha["ud"]),
            "samples": [
                {"state": s, "t_over_tau": t, "re_alpha": re, "im_alpha": im, "phi_rad": ph}
                for s, t, re, im, ph in traj.rows()
            ],
        }
        params = {"p": g.p, "window_tau": g.window_tau, "samples": g.samples}
        return _dump_json(_report("gate trajectory", params, results))
    # one row per sample time, four columns per spin state
    rows = []
    for i, t in enumerate(traj.t):
        row = [t]
        for s in STATES:
            a = traj.alpha[s][i]
            row += [a.real, a.imag, abs(a) ** 2, traj.phase[s][i]]
        rows.append(row)
    return _dump_csv(TRAJECTORY_HEADER, rows, args.digits)


def _washboard_spec(cfg):
    w = cfg.washboard
    gamma_min = w.gyromagnetic_min_hz_per_gauss * TWO_PI / wb.GAUSS
    return wb.WashboardSpec.from_gauss(w.bias_field_gauss, w.amplitude_gauss, w.period_m,
                                       w.speed_m_per_s, gamma_min)


def cmd_washboard(cfg, args):
    spec = _washboard_spec(cfg)
    ctx = cfg.trap_context()
    results = wb.report(spec, ctx)
    results.pop("spec")
    params = dict(
        species=ctx.species.to_dict(),
        com_frequency_hz=cfg.trap.com_frequency_hz,
        bias_field_gauss=cfg.washboard.bias_field_gauss,
        amplitude_gauss=cfg.washboard.amplitude_gauss,
        period_m=cfg.washboard.period_m,
        speed_m_per_s=cfg.washboard.speed_m_per_s,
        gyromagnetic_min_hz_per_gauss=cfg.washboard.gyromagnetic_min_hz_per_gauss,
    )
    warnings = []
    if results["adiabaticity_margin"] > 0.1:
        warnings.append("spins may not follow the field adiabatically")
    return _report("washboard", params, results, warnings)


# -- verify -------------------------------------------------------------------

def _verify_draws(v, n):
    rng = np.random.default_rng(v.seed)
    draws = []
    for _ in range(n):
        tau = rng.uniform(0.3e-6, 40e-6)
        draws.append({
            "A0": rng.uniform(0.1, 10.0) * 1e6 * np.exp(1j * rng.uniform(0, TWO_PI)),
            "eta": rng.uniform(0.01, 0.4),
            "tau": tau,
            "delta": rng.uniform(0.5, 4.5) * math.sqrt(2.0) / tau,
        })
    return draws


def _verify_gaussian(d, oracle_tol, fault):
    A0, eta, delta, tau = d["A0"], d["eta"], d["delta"], d["tau"]
    env = oracle.Envelope.gaussian(A0, eta, delta, tau)
    probe = np.linspace(-4.0, 4.0, 17) * tau
    res = oracle.integrate_displacement(env, tol=oracle_tol, times=probe)
    closed = pg.alpha_of_t(A0, eta, delta, tau, res.t)
    a_inf = pg.alpha_infinity(A0, eta, delta, tau)
    phi = pg.logic_phase_coeff(A0, eta, delta, tau)
    if fault:
        a_inf *= 1.0 + 1e-6
        phi *= 1.0 + 1e-6
    peak = float(np.max(np.abs(closed)))
    return {
        "alpha_t": float(np.max(np.abs(res.alpha - closed))) / peak,
        "alpha_inf": abs(res.alpha_final - a_inf) / peak,
        "phase": abs(res.phi_final - phi) / abs(phi),
    }


def _verify_square(d, oracle_tol, fault):
    A0, eta, delta = d["A0"], d["eta"], d["delta"]
    T = 3.0 * d["tau"]
    env = oracle.Envelope.square(A0, eta, delta, T)
    res = oracle.integrate_displacement(env, tol=oracle_tol)
    a, ph = oracle.square_pulse_closed_form(A0, eta, delta, T)
    if fault:
        a *= 1.0 + 1e-6
        ph *= 1.0 + 1e-6
    return {
        "alpha_inf": abs(res.alpha_final - a) / max(abs(a), 1e-300),
        "phase": abs(res.phi_final - ph) / max(abs(ph), 1e-300),
    }


def cmd_verify(cfg, args):
    v = cfg.verify
    n = args.samples if args.samples is not None else v.draws
    draws = _verify_draws(v, n)
    fault = bool(args.inject_fault)
    if v.mode == "square":
        fn = lambda d: _verify_square(d, v.oracle_tol, fault)  # noqa: E731
        tols = {"alpha_inf": v.tol_square, "phase": v.tol_square}
    else:
        fn = lambda d: _verify_gaussian(d, v.oracle_tol, fault)  # noqa: E731
        tols = {"alpha_t": v.tol_alpha, "alpha_inf": v.tol_alpha, "phase": v.tol_phase}
    if args.tol is not None:
        tols = {k: args.tol for k in tols}
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            resid = list(pool.map(fn, draws))
    else:
        resid = [fn(d) for d in draws]
    table = []
    ok = True
    for key, tol in tols.items():
        worst = max((r[key] for r in resid), default=0.0)
        passed = worst <= tol
        ok &= passed
        table.append({"quantity": key, "max_residual": worst, "tolerance": tol, "pass": passed})
    params = {"mode": v.mode, "draws": n, "seed": v.seed, "oracle_tol": v.oracle_tol}
    return _report("verify", params, {"residuals": table, "pass": ok}), ok


# -- entry point --------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--samples", type=int, metavar="N",
                        help="trajectory samples, or number of random draws for verify")
    common.add_argument("--tol", type=float, metavar="X", help="override verify tolerances")
    common.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker threads; output order does not depend on this")
    common.add_argument("--digits", type=int, default=17, metavar="N",
                        help="significant digits in CSV output (17 round-trips exactly)")
    common.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="transport-gates", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rotate", parents=[common], help="one-qubit transport rotation")
    gate = sub.add_parser("gate", help="two-qubit transport phase gate")
    gsub = gate.add_subparsers(dest="gate_command", required=True)
    gsub.add_parser("design", parents=[common], help="design one operating point")
    gsub.add_parser("table", parents=[common], help="parameter table over n")
    gsub.add_parser("trajectory", parents=[common], help="phase-space trajectory")
    sub.add_parser("washboard", parents=[common], help="magnetic washboard gate")
    sub.add_parser("verify", parents=[common], help="closed forms against the oracle")
    return parser


_DEFAULT_FORMAT = {"table": "csv", "trajectory": "csv"}


def run(argv=None):
    """Run the CLI; returns ``(exit_code, output_text)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    key = args.gate_command if args.command == "gate" else args.command
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(key, "json")
    if args.threads < 1:
        return EXIT_CONFIG, "error: --threads must be >= 1\n"
    if args.digits < 1 or args.digits > 17:
        return EXIT_CONFIG, "error: --digits must be in 1..17\n"
    try:
        cfg = cfgmod.load(args.config)
        if args.samples is not None and key != "verify":
            if args.samples < 2:
                raise ConfigError("--samples must be >= 2")
            cfg.gate.samples = args.samples
        if args.format == "csv" and key not in ("table", "trajectory"):
            raise ConfigError(f"{key} only writes json")
        code = EXIT_OK
        if key == "rotate":
            text = _dump_json(cmd_rotate(cfg, args))
        elif key == "design":
            text = _dump_json(cmd_gate_design(cfg, args))
        elif key == "table":
            text = cmd_gate_table(cfg, args)
        elif key == "trajectory":
            text = cmd_gate_trajectory(cfg, args)
        elif key == "washboard":
            text = _dump_json(cmd_washboard(cfg, args))
        else:
            report, ok = cmd_verify(cfg, args)
            text = _dump_json(report)
            code = EXIT_OK if ok else EXIT_VERIFY
    except ConfigError as exc:
        return EXIT_CONFIG, f"config error: {exc}\n"
    except ToleranceNotMet as exc:
        return EXIT_VERIFY, f"verification failed: {exc}\n"
    except DomainError as exc:
        return EXIT_DOMAIN, f"domain error: {type(exc).__name__}: {exc}\n"
    except TransportGateError as exc:
        return EXIT_DOMAIN, f"error: {exc}\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv=None):
    code, text = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_VERIFY) else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
