"""Phase gates through an arbitrary normal mode of a mixed-species crystal.

Mode eigenvectors are inputs. Only the two qubit-ion components ``v1, v2``
enter the gate; refrigerator-ion components are carried along for the
normalisation check.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .errors import DomainError
from .phasegate import (
    _STRETCH,
    _logic_phase_kernel,
    logic_phase_from_coefficients,
    mode_drive_coefficients,
)
from .physics import HBAR, TWO_PI

_NORM_SLACK = 1e-9


@dataclass(frozen=True)
class ModeSpec:
    """One normal mode: frequency (rad/s) and real eigenvector components."""

    omega: float
    v1: float
    v2: float
    refrigerator_amplitudes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("mode frequency must be > 0")
        comps = (self.v1, self.v2, *self.refrigerator_amplitudes)
        if not all(math.isfinite(c) for c in comps):
            raise DomainError("eigenvector components must be finite reals")
        if sum(c * c for c in comps) > 1.0 + _NORM_SLACK:
            raise DomainError("eigenvector components exceed unit norm")
        object.__setattr__(self, "refrigerator_amplitudes", tuple(self.refrigerator_amplitudes))


def stretch_mode(omega_str):
    return ModeSpec(omega_str, *_STRETCH)


def generalized_coefficients(mode, omega_up, omega_down, phi_half):
    """Drive amplitudes ``A_ss' = v1 e^{-i phi} Omega_s + v2 e^{i phi} Omega_s'``."""
    return mode_drive_coefficients(mode.v1, mode.v2, omega_up, omega_down, phi_half)


def generalized_logic_phase(mode, omega_up, omega_down, eta, delta, tau, phi_half):
    """Logical phase through ``mode``.

    ``(pi/2) exp(-p^2) erfi(p) 2 v1 v2 eta^2 tau^2 (Omega_up - Omega_down)^2 cos(2 phi)``;
    ``v1 v2 = -1/2`` gives the two-ion stretch result.
    """
    return _logic_phase_kernel(mode.v1 * mode.v2, omega_up, omega_down, eta, delta, tau, phi_half)


def generalized_logic_phase_from_coefficients(mode, omega_up, omega_down, eta, delta, tau, phi_half):
    coeffs = generalized_coefficients(mode, omega_up, omega_down, phi_half)
    return logic_phase_from_coefficients(coeffs, eta, delta, tau)


def mode_lamb_dicke(mode, delta_k, mass):
    """``delta_k * sqrt(hbar / (2 m omega_v))`` for a mode of frequency omega_v."""
    return delta_k * math.sqrt(HBAR / (2.0 * mass * mode.omega))


def mode_suitability(mode, delta_k, mass):
    """Figure of merit ``|v1 v2| eta^2``; larger needs less laser power."""
    return abs(mode.v1 * mode.v2) * mode_lamb_dicke(mode, delta_k, mass) ** 2


def spacing_condition(delta_kz, d12, tol=1e-9):
    """Check ``delta_kz * d12 = n pi``; returns ``(n_nearest, residual_rad, ok)``."""
    x = delta_kz * d12 / math.pi
    n = round(x)
    resid = (x - n) * math.pi
    return n, resid, abs(resid) <= tol * max(1.0, abs(delta_kz * d12))


# -- mode files ---------------------------------------------------------------

def load_modes(path):
    """Read modes from CSV with columns ``frequency_hz, v1, v2, r1, r2, ...``."""
    modes = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != ["frequency_hz", "v1", "v2"]:
            raise DomainError(f"{path}: header must start with frequency_hz,v1,v2")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                vals = [float(x) for x in row if x.strip() != ""]
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
            if len(vals) < 3:
                raise DomainError(f"{path}:{lineno}: need frequency_hz, v1, v2")
            modes.append(ModeSpec(vals[0] * TWO_PI, vals[1], vals[2], tuple(vals[3:])))
    return modes


def save_modes(path, modes):
    n_ref = max((len(m.refrigerator_amplitudes) for m in modes), default=0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["frequency_hz", "v1", "v2", *[f"r{i + 1}" for i in range(n_ref)]])
        for m in modes:
            refs = list(m.refrigerator_amplitudes) + [""] * (n_ref - len(m.refrigerator_amplitudes))
            w.writerow([f"{m.omega / TWO_PI:.17g}", f"{m.v1:.17g}", f"{m.v2:.17g}",
                        *[r if r == "" else f"{r:.17g}" for r in refs]])
