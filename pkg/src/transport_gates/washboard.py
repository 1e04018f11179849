"""Laser-free phase gate: ions transported over a periodic magnet array.

Moving at ``v_w`` over magnets of period ``d_m``, each ion sees a rotating
field of amplitude ``Bw`` on top of the bias ``B0``. The field gradient
exerts a state-dependent force at ``omega_w = 2 pi v_w / d_m``, which is
tuned near the centre-of-mass mode.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, ExpansionInvalid
from .physics import HBAR, MU_B, TWO_PI, mode_ground_extent

GAUSS = 1e-4  # T

# Differential Zeeman slope of the stretched pair |F=2, m_F=+2> / |F=2, m_F=-2>
# (g_F = 1/2 each side, so 2 mu_B per unit field across the pair).
STRETCHED_PAIR_SLOPE = 2.0 * MU_B

_SCAN_POINTS = 10_000

SPIN_ECHO_NOTE = (
    "the DC offset phase can be cancelled by splitting the gate into two "
    "halves of logical phase pi/4 each with a spin echo in between; not simulated"
)


@dataclass(frozen=True)
class WashboardSpec:
    """Washboard parameters in SI units.

    Attributes
    ----------
    B0 : float
        Bias field (T).
    Bw : float
        Washboard amplitude at the ion height (T).
    d_m : float
        Magnet period (m).
    v_w : float
        Transport speed (m/s).
    gamma_min : float
        Smallest gyromagnetic ratio among the qubit states (rad/(s T)).
    """

    B0: float
    Bw: float
    d_m: float
    v_w: float
    gamma_min: float = MU_B / HBAR

    def __post_init__(self):
        if not self.B0 > 0:
            raise DomainError("B0 must be > 0")
        # Bw = 0 is kept as the trivial no-washboard limit
        if not self.Bw >= 0:
            raise DomainError("Bw must be >= 0")
        if not self.d_m > 0:
            raise DomainError("d_m must be > 0")
        if not self.v_w > 0:
            raise DomainError("v_w must be > 0")
        if not self.gamma_min > 0:
            raise DomainError("gamma_min must be > 0")

    @property
    def omega_w(self):
        return TWO_PI * self.v_w / self.d_m

    @classmethod
    def from_gauss(cls, B0_gauss, Bw_gauss, d_m, v_w, gamma_min=MU_B / HBAR):
        return cls(B0_gauss * GAUSS, Bw_gauss * GAUSS, d_m, v_w, gamma_min)


def field_total(spec, t):
    """Field magnitude sqrt((B0 - Bw cos wt)^2 + (Bw sin wt)^2) in T."""
    t = np.asarray(t, dtype=float)
    ph = spec.omega_w * t
    out = np.hypot(spec.B0 - spec.Bw * np.cos(ph), spec.Bw * np.sin(ph))
    return out.item() if out.ndim == 0 else out


def _period_grid(spec, n=_SCAN_POINTS):
    return np.arange(n) * (TWO_PI / spec.omega_w / n)


@dataclass(frozen=True)
class HarmonicDecomposition:
    B_dc: float
    B_osc: float
    omega_w: float
    residual: float


def harmonic_decomposition(spec):
    """Split the field into ``B_dc - B_osc cos(omega_w t)`` plus a residual.

    ``B_dc = B0 (1 + (Bw/B0)^2 / 4)``; the residual is the largest deviation
    from the exact magnitude over one period on a 10^4-point grid.

    Raises
    ------
    ExpansionInvalid
        If ``Bw >= B0``.
    """
    if spec.Bw >= spec.B0:
        raise ExpansionInvalid("harmonic expansion needs Bw < B0")
    b_dc = spec.B0 * (1.0 + 0.25 * (spec.Bw / spec.B0) ** 2)
    t = _period_grid(spec)
    approx = b_dc - spec.Bw * np.cos(spec.omega_w * t)
    resid = float(np.max(np.abs(field_total(spec, t) - approx)))
    return HarmonicDecomposition(b_dc, spec.Bw, spec.omega_w, resid)


def dc_offset(spec):
    """Rise of the mean field above the bias, Bw^2 / (4 B0) (T)."""
    return spec.Bw ** 2 / (4.0 * spec.B0)


def magnetic_lamb_dicke(spec, ctx):
    """eta_m = 2 pi z0 / d_m with the two-ion COM extent z0."""
    return TWO_PI * mode_ground_extent(ctx, "com", 2) / spec.d_m


def gate_rabi(spec, ctx):
    """Gate Rabi frequency (2 pi / d_m) z0 mu_B Bw / hbar (rad/s)."""
    return magnetic_lamb_dicke(spec, ctx) * MU_B * spec.Bw / HBAR


def gate_duration(spec, ctx):
    """tau_m = pi / Omega_m (s)."""
    om = gate_rabi(spec, ctx)
    if om == 0:
        raise DomainError("zero gate Rabi frequency")
    return math.pi / om


def residual_z_phase(spec, duration):
    """Z phase from the DC offset over ``duration``.

    Returns
    -------
    raw : float
        ``STRETCHED_PAIR_SLOPE * Bw^2/(4 B0) * duration / hbar`` (rad).
    wrapped : float
        ``raw`` reduced to [0, 2 pi).
    """
    raw = STRETCHED_PAIR_SLOPE * dc_offset(spec) * duration / HBAR
    return raw, math.fmod(raw, TWO_PI)


def adiabaticity_margin(spec, n=_SCAN_POINTS):
    """max |dB/dt| / |B| over one period, divided by gamma_min * min |B|.

    The field vector rotates; its derivative is
    ``omega_w Bw (-sin wt... )`` with magnitude ``omega_w Bw``. Values much
    less than 1 mean the spins follow the field adiabatically.
    """
    if spec.Bw == 0:
        return 0.0
    t = _period_grid(spec, n)
    ph = spec.omega_w * t
    bx = spec.B0 - spec.Bw * np.cos(ph)
    by = spec.Bw * np.sin(ph)
    dbx = spec.Bw * spec.omega_w * np.sin(ph)
    dby = spec.Bw * spec.omega_w * np.cos(ph)
    mag = np.hypot(bx, by)
    rate = np.hypot(dbx, dby) / mag
    return float(np.max(rate) / (spec.gamma_min * np.min(mag)))


def report(spec, ctx):
    """All washboard figures in SI units, plus Hz/G conveniences."""
    dec = harmonic_decomposition(spec)
    om = gate_rabi(spec, ctx)
    tau_m = math.pi / om if om else math.inf
    raw, wrapped = residual_z_phase(spec, tau_m) if om else (0.0, 0.0)
    return {
        "spec": asdict(spec),
        "omega_w_rad_s": dec.omega_w,
        "omega_w_hz": dec.omega_w / TWO_PI,
        "dc_field_t": dec.B_dc,
        "dc_offset_t": dc_offset(spec),
        "dc_offset_gauss": dc_offset(spec) / GAUSS,
        "expansion_residual_t": dec.residual,
        "eta_m": magnetic_lamb_dicke(spec, ctx),
        "gate_rabi_rad_s": om,
        "gate_rabi_hz": om / TWO_PI,
        "gate_duration_s": tau_m,
        "residual_z_phase_rad": raw,
        "residual_z_phase_turns": raw / TWO_PI,
        "residual_z_phase_mod_2pi_rad": wrapped,
        "adiabaticity_margin": adiabaticity_margin(spec),
        "note": SPIN_ECHO_NOTE,
    }
