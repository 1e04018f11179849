"""One-qubit gates applied by moving an ion through a Raman beam pair."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beams import envelope
from .errors import DegenerateGeometry, DomainError, NotUnitary
from .numerics import erf_real, erfc_real

TWO_PI = 2.0 * math.pi
_UNITARY_TOL = 1e-10


def _wrap(angle):
    return math.fmod(math.fmod(angle, TWO_PI) + TWO_PI, TWO_PI)


@dataclass(frozen=True)
class OneQubitRotation:
    """Rabi rotation R(theta, phi) about an equatorial axis of the Bloch sphere."""

    theta: float
    phi: float = 0.0

    def matrix(self):
        c = math.cos(self.theta / 2.0)
        s = math.sin(self.theta / 2.0)
        return np.array(
            [[c, -1j * np.exp(-1j * self.phi) * s],
             [-1j * np.exp(1j * self.phi) * s, c]],
            dtype=complex,
        )


@dataclass(frozen=True)
class ZRotation:
    """Z(phi) = diag(exp(i phi), exp(-i phi))."""

    phi: float

    def matrix(self):
        return np.diag([np.exp(1j * self.phi), np.exp(-1j * self.phi)])

    def __matmul__(self, other):
        if not isinstance(other, ZRotation):
            return NotImplemented
        return merge_z(other, self)


def pulse_area(env, T=math.inf):
    """Integral of the transit envelope over [-T, T] (rad).

    ``Omega_m * tau * sqrt(pi) * erf(T / tau)``; ``T = inf`` gives the full
    transit.
    """
    if T < 0:
        raise DomainError("T must be >= 0")
    frac = 1.0 if math.isinf(T) else erf_real(T / env.tau)
    return env.peak_rabi * env.tau * math.sqrt(math.pi) * frac


def rotation_angle(env, T=math.inf):
    """Bloch rotation angle, twice the pulse area."""
    return 2.0 * pulse_area(env, T)


bloch_angle = rotation_angle


def truncation_error(D, beam):
    """Relative angle error from starting the transit a distance ``D`` before the beam.

    Returns
    -------
    rel : float
        ``1 - erf(sqrt(2) D sin(angle) / w0)``.
    infidelity : float
        ``rel**2``, the leading-order infidelity.
    """
    if D < 0:
        raise DomainError("D must be >= 0")
    x = math.sqrt(2.0) * D * math.sin(beam.angle) / beam.waist
    rel = erfc_real(x)
    return rel, rel * rel


def transit_time_ratio(d_cutoff):
    """Total transit time over the fixed-beam pulse time, for a cutoff in waists."""
    if not d_cutoff > 0:
        raise DomainError("cutoff must be > 0")
    return d_cutoff * math.sqrt(2.0 / math.pi)


def solve_velocity(beam, peak_rabi, theta_target):
    """Speed giving Bloch angle ``theta_target`` for a complete transit.

    Closed form ``v = Omega_m w0 sqrt(2 pi) / (theta sin(angle))``.
    """
    if not theta_target > 0 or not peak_rabi > 0:
        raise DomainError("theta_target and peak_rabi must be > 0")
    sin_g = math.sin(beam.angle)
    if sin_g <= 1e-15:
        raise DegenerateGeometry("sin(angle) = 0")
    return peak_rabi * beam.waist * math.sqrt(2.0 * math.pi) / (theta_target * sin_g)


def solve_rotation(beam, peak_rabi, theta_target, start_offset=math.inf):
    v = solve_velocity(beam, peak_rabi, theta_target)
    return envelope(beam, v, peak_rabi, start_offset)


def site_phase(s0, species):
    """Laser phase picked up at a site ``s0`` metres downstream, mod 2 pi."""
    if s0 < 0:
        raise DomainError("s0 must be >= 0")
    return _wrap(TWO_PI * s0 / species.hyperfine_wavelength)


def is_unitary(U, tol=_UNITARY_TOL):
    U = np.asarray(U, dtype=complex)
    return U.shape == (2, 2) and np.max(np.abs(U @ U.conj().T - np.eye(2))) <= tol


def decompose_one_qubit(U, phi=0.0):
    """Write ``U = exp(i phi4) Z(phi3) R(theta2, phi) Z(phi1)``.

    Parameters
    ----------
    U : (2, 2) array_like
        Unitary to 1e-10.
    phi : float
        Azimuth of the available transport rotation.

    Returns
    -------
    phi1, theta2, phi3, phi4 : float
        ``theta2`` in [0, pi]; the other angles in [0, 2 pi).

    Raises
    ------
    NotUnitary
    """
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise NotUnitary("input is not a 2x2 unitary to 1e-10")
    phi4 = 0.5 * np.angle(np.linalg.det(U))
    V = np.exp(-1j * phi4) * U
    # V is in SU(2): V00 = exp(i S) cos, V01 = -i exp(i D) sin
    theta2 = 2.0 * math.atan2(abs(V[0, 1]), abs(V[0, 0]))
    sigma = np.angle(V[0, 0]) if abs(V[0, 0]) > 1e-300 else 0.0
    delta = np.angle(1j * V[0, 1]) if abs(V[0, 1]) > 1e-300 else 0.0
    # Z(a) R Z(b) gives V00 = exp(i(a+b)) c and V01 = -i exp(i(a-b-phi)) s
    phi3 = 0.5 * (sigma + delta + phi)
    phi1 = 0.5 * (sigma - delta - phi)
    return _wrap(phi1), theta2, _wrap(phi3), _wrap(phi4)


def reconstruct(phi1, theta2, phi3, phi4, phi=0.0):
    return (np.exp(1j * phi4) * ZRotation(phi3).matrix()
            @ OneQubitRotation(theta2, phi).matrix() @ ZRotation(phi1).matrix())


def merge_z(prev_final, next_initial):
    """Fold the closing Z of one gate into the opening Z of the next."""
    return ZRotation(_wrap(prev_final.phi + next_initial.phi))
