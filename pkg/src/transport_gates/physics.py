"""Physical constants, ion species and two-ion trap geometry.

Constants (CODATA 2018, SI)
---------------------------
============  ======================  ==========
name          value                   unit
============  ======================  ==========
HBAR          1.054571817e-34         J s
E_CHARGE      1.602176634e-19         C
EPS0          8.8541878128e-12        F/m
AMU           1.66053906660e-27       kg
C_LIGHT       299792458               m/s
MU_B          9.2740100783e-24        J/T
============  ======================  ==========
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ZeroProjection

HBAR = 1.054571817e-34
E_CHARGE = 1.602176634e-19
EPS0 = 8.8541878128e-12
AMU = 1.66053906660e-27
C_LIGHT = 299792458.0
MU_B = 9.2740100783e-24

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class IonSpecies:
    """Qubit ion.

    Attributes
    ----------
    name : str
    mass : float
        kg.
    qubit_splitting : float
        Hyperfine qubit frequency omega_0 in rad/s.
    raman_wavelength : float
        Wavelength of the Raman beams in m.
    """

    name: str
    mass: float
    qubit_splitting: float
    raman_wavelength: float

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"species {self.name!r}: mass must be > 0")
        if not self.qubit_splitting > 0:
            raise DomainError(f"species {self.name!r}: qubit splitting must be > 0")
        if not self.raman_wavelength > 0:
            raise DomainError(f"species {self.name!r}: wavelength must be > 0")

    @property
    def hyperfine_wavelength(self):
        """Microwave wavelength of the qubit transition, 2 pi c / omega_0 (m)."""
        return TWO_PI * C_LIGHT / self.qubit_splitting

    def to_dict(self):
        return {
            "name": self.name,
            "mass_u": self.mass / AMU,
            "qubit_frequency_hz": self.qubit_splitting / TWO_PI,
            "raman_wavelength_m": self.raman_wavelength,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"],
            mass=data["mass_u"] * AMU,
            qubit_splitting=data["qubit_frequency_hz"] * TWO_PI,
            raman_wavelength=data["raman_wavelength_m"],
        )


BE9 = IonSpecies("Be9", 9.0121831 * AMU, TWO_PI * 1.25e9, 313e-9)
# Mass number instead of the atomic mass; the published Be+ gate-parameter
# table is reproduced with this value (it shifts d by +0.045 %).
BE9_NOMINAL = IonSpecies("Be9_nominal", 9.0 * AMU, TWO_PI * 1.25e9, 313e-9)

SPECIES = {s.name: s for s in (BE9, BE9_NOMINAL)}


def get_species(name):
    try:
        return SPECIES[name]
    except KeyError:
        known = ", ".join(sorted(SPECIES))
        raise KeyError(f"unknown species {name!r} (known: {known})") from None


@dataclass(frozen=True)
class TrapContext:
    """Two equal-mass ions in a common harmonic well.

    Parameters
    ----------
    species : IonSpecies
    omega_com : float
        Axial centre-of-mass frequency in rad/s.
    """

    species: IonSpecies
    omega_com: float

    def __post_init__(self):
        if not self.omega_com > 0:
            raise DomainError("omega_com must be > 0")

    @property
    def mass(self):
        return self.species.mass

    @property
    def omega_str(self):
        """Stretch-mode frequency, sqrt(3) * omega_com for equal masses."""
        return math.sqrt(3.0) * self.omega_com

    @property
    def d(self):
        return equilibrium_distance(self)

    def z0(self, mode="stretch", ion_count=2):
        return mode_ground_extent(self, mode, ion_count)

    def to_dict(self):
        return {"species": self.species.to_dict(), "com_frequency_hz": self.omega_com / TWO_PI}

    @classmethod
    def from_dict(cls, data):
        return cls(IonSpecies.from_dict(data["species"]), data["com_frequency_hz"] * TWO_PI)


def equilibrium_distance(ctx):
    """Ion spacing d = [q^2 / (2 pi eps0 m omega_com^2)]^(1/3) in m."""
    return (E_CHARGE ** 2 / (2.0 * math.pi * EPS0 * ctx.mass * ctx.omega_com ** 2)) ** (1.0 / 3.0)


def mode_ground_extent(ctx, mode="stretch", ion_count=2):
    """Ground-state extent of a motional mode in m.

    Single ion: sqrt(hbar / (2 m omega_com)). Two ions: the centre-of-mass
    mode carries twice the mass, sqrt(hbar / (4 m omega_com)); the stretch
    mode uses the normal-coordinate convention sqrt(hbar / (2 m omega_str)).
    """
    if ion_count == 1:
        if mode != "com":
            raise DomainError("a single ion only has the 'com' mode")
        return math.sqrt(HBAR / (2.0 * ctx.mass * ctx.omega_com))
    if ion_count != 2:
        raise DomainError("ion_count must be 1 or 2")
    if mode == "com":
        return math.sqrt(HBAR / (4.0 * ctx.mass * ctx.omega_com))
    if mode == "stretch":
        return math.sqrt(HBAR / (2.0 * ctx.mass * ctx.omega_str))
    raise DomainError(f"unknown mode {mode!r}; expected 'com' or 'stretch'")


def lamb_dicke(ctx, beams):
    """Stretch-mode Lamb-Dicke factor for counter-propagating Raman beams.

    eta = 2 k cos(angle) * sqrt(hbar / (2 m omega_str)). Signed: negative for
    angles past pi/2.
    """
    if beams.config != "counter_propagating":
        raise ZeroProjection("co-propagating beams have no wavevector difference")
    cos_g = math.cos(beams.angle)
    if abs(cos_g) < 1e-15:
        raise ZeroProjection("beams perpendicular to the transport axis")
    return 2.0 * beams.k * cos_g * mode_ground_extent(ctx, "stretch", 2)
