"""Collimated Gaussian beams and the coupling envelope seen by a moving ion."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateGeometry, DomainError, ParaxialDomain

CO_PROPAGATING = "co_propagating"
COUNTER_PROPAGATING = "counter_propagating"


@dataclass(frozen=True)
class BeamGeometry:
    """A TEM00 beam pair crossing the transport axis.

    Parameters
    ----------
    waist : float
        1/e field radius w0 at the focus (m).
    wavelength : float
        m.
    angle : float
        Angle between the beam axis and the transport direction (rad),
        strictly between 0 and pi.
    config : str
        ``"co_propagating"`` (one-qubit rotations) or
        ``"counter_propagating"`` (phase gate).
    paraxial_limit : float
        Fraction of the Rayleigh range inside which the waist approximation
        is accepted.
    """

    waist: float
    wavelength: float
    angle: float = math.pi / 2
    config: str = CO_PROPAGATING
    paraxial_limit: float = 0.1

    def __post_init__(self):
        if not self.waist > 0:
            raise DomainError("beam waist must be > 0")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")
        if not 0.0 < self.angle < math.pi:
            raise DomainError("beam angle must lie strictly between 0 and pi")
        if self.config not in (CO_PROPAGATING, COUNTER_PROPAGATING):
            raise DomainError(f"unknown beam configuration {self.config!r}")
        if not 0.0 < self.paraxial_limit <= 1.0:
            raise DomainError("paraxial_limit must be in (0, 1]")

    @property
    def k(self):
        return 2.0 * math.pi / self.wavelength

    @property
    def rayleigh_range(self):
        return self.k * self.waist ** 2 / 2.0

    def with_angle(self, angle):
        return replace(self, angle=angle)


@dataclass(frozen=True)
class TransitEnvelope:
    """Rabi frequency seen during one straight transit, peak_rabi * exp(-t^2/tau^2).

    ``tau = w0 / (sqrt(2) v sin(angle))``; the ion crosses the beam centre at
    t = 0 and starts ``start_offset`` metres before it.
    """

    peak_rabi: float
    tau: float
    speed: float
    start_offset: float = math.inf

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.peak_rabi * np.exp(-(t / self.tau) ** 2)
        return out.item() if out.ndim == 0 else out

    @property
    def start_time(self):
        return self.start_offset / self.speed


def field_amplitude(beam, r, z=0.0):
    """Relative field amplitude exp(-r^2 / w0^2) near the focus.

    Raises
    ------
    ParaxialDomain
        When ``|z|`` reaches ``beam.paraxial_limit * z_r``; the curved-wavefront
        region is refused rather than approximated.
    """
    if abs(z) >= beam.paraxial_limit * beam.rayleigh_range:
        raise ParaxialDomain(
            f"|z| = {abs(z):.3e} m is not << z_r = {beam.rayleigh_range:.3e} m")
    r = np.asarray(r, dtype=float)
    out = np.exp(-(r / beam.waist) ** 2)
    return out.item() if out.ndim == 0 else out


def envelope(beam, v, peak_rabi, start_offset=math.inf):
    """Transit envelope for transport at speed ``v`` (m/s) through ``beam``."""
    if not v > 0:
        raise DomainError("transport speed must be > 0")
    sin_g = math.sin(beam.angle)
    if sin_g <= 1e-15:
        raise DegenerateGeometry("transport along the beam axis never leaves the beam")
    tau = beam.waist / (math.sqrt(2.0) * v * sin_g)
    return TransitEnvelope(peak_rabi=peak_rabi, tau=tau, speed=v, start_offset=start_offset)
