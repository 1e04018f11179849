"""Two-qubit geometric phase gate driven by transport through a Raman beam pair.

Two ions travel through counter-propagating beams whose wavevector
difference has a component along the trap axis. The spin-dependent force
pushes the stretch mode around a loop in phase space; the enclosed area
becomes a spin-dependent phase.

Conventions
-----------
* The transit envelope is ``A(t) = A0 exp(-t^2/tau^2)``.
* ``delta`` is the detuning of the beat note from the stretch mode, taken
  positive on the blue side (``delta0 = omega_str + delta``).
* ``p = delta tau / sqrt(2)``.
* Displacements are dimensionless, in units of the stretch-mode ground-state
  extent.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .beams import COUNTER_PROPAGATING, BeamGeometry
from .errors import DegenerateRatio, DomainError, NoSolution, OutOfRange
from .numerics import erf_complex, erfi_scaled
from .physics import TWO_PI, equilibrium_distance, lamb_dicke

SQRT_PI = math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)

_STRETCH = (1.0 / SQRT2, -1.0 / SQRT2)

TAU_TEXT = "text"    # tau = w0 / (sqrt(2) v sin(gamma))
TAU_TABLE = "table"  # tau = w0 / (2 sqrt(2) v sin(gamma))


@dataclass(frozen=True)
class DriveCoefficients:
    """Force amplitudes on the stretch mode for each two-ion spin state (rad/s)."""

    A_uu: complex
    A_ud: complex
    A_du: complex
    A_dd: complex
    phi_half: float
    omega_up: float
    omega_down: float

    def as_dict(self):
        return {"uu": self.A_uu, "ud": self.A_ud, "du": self.A_du, "dd": self.A_dd}


def mode_drive_coefficients(v1, v2, omega_up, omega_down, phi_half):
    """Drive amplitudes for a mode with eigenvector components ``(v1, v2)``.

    Ion j contributes ``v_j * Omega_s * exp(-+ i phi_half)`` with the upper
    sign for the first ion; the two-ion stretch mode is ``(1/sqrt2, -1/sqrt2)``.
    """
    em = np.exp(-1j * phi_half)
    ep = np.exp(1j * phi_half)

    def amp(s1, s2):
        return complex(v1 * s1 * em + v2 * s2 * ep)

    return DriveCoefficients(
        A_uu=amp(omega_up, omega_up),
        A_ud=amp(omega_up, omega_down),
        A_du=amp(omega_down, omega_up),
        A_dd=amp(omega_down, omega_down),
        phi_half=phi_half,
        omega_up=omega_up,
        omega_down=omega_down,
    )


def drive_coefficients(omega_up, omega_down, phi_half):
    """Stretch-mode drive amplitudes.

    ``A_uu = -sqrt2 i sin(phi) Omega_up``,
    ``A_ud = (Omega_up e^{-i phi} - Omega_down e^{i phi}) / sqrt2`` and the
    mirror images for ``du`` and ``dd``.
    """
    return mode_drive_coefficients(*_STRETCH, omega_up, omega_down, phi_half)


def doppler_detuning(k, v, gamma):
    """Beat-note frequency seen by ions moving at ``v``: 2 k v cos(gamma)."""
    return 2.0 * k * v * math.cos(gamma)


def alpha_of_t(A0, eta, delta, tau, t):
    """Displacement accumulated from t = -inf up to ``t``.

    ``eta A0 tau (sqrt(pi)/2) exp(-delta^2 tau^2/4) [1 + erf(t/tau - i delta tau/2)]``
    """
    t = np.asarray(t, dtype=float)
    c = delta * tau / 2.0
    pref = eta * A0 * tau * SQRT_PI / 2.0
    # exp(-c^2) times erf growing like exp(c^2) stays finite on the strip
    out = pref * np.exp(-c * c) * (1.0 + erf_complex(t / tau - 1j * c))
    return out.item() if out.ndim == 0 else out


def alpha_symmetric(A0, eta, delta, tau, t):
    """Displacement over the symmetric window [-t, t].

    ``exp(-delta^2 tau^2/4) (sqrt(pi) eta A0 tau / 2) [erf(t/tau - i c) + erf(t/tau + i c)]``
    with ``c = delta tau / 2``. Reaches :func:`alpha_infinity` as t grows.
    """
    t = np.asarray(t, dtype=float)
    c = delta * tau / 2.0
    pref = eta * A0 * tau * SQRT_PI / 2.0
    x = t / tau
    out = pref * np.exp(-c * c) * (erf_complex(x - 1j * c) + erf_complex(x + 1j * c))
    return out.item() if out.ndim == 0 else out


def alpha_infinity(A0, eta, delta, tau):
    """Net displacement after a complete transit, sqrt(pi) eta A0 tau exp(-delta^2 tau^2/4)."""
    return SQRT_PI * eta * A0 * tau * math.exp(-(delta * tau) ** 2 / 4.0)


def logic_phase_coeff(A0, eta, delta, tau):
    """Phase picked up by one spin state over a complete transit (rad).

    ``|eta A0|^2 tau^2 (pi/2) exp(-p^2) erfi(p)`` with ``p = delta tau / sqrt2``.
    """
    p = delta * tau / SQRT2
    return abs(eta * A0) ** 2 * tau ** 2 * (math.pi / 2.0) * float(erfi_scaled(p))


def _logic_phase_kernel(v1v2, omega_up, omega_down, eta, delta, tau, phi_half):
    # Phi_uu + Phi_dd - Phi_ud - Phi_du in closed form for any two-ion mode
    p = delta * tau / SQRT2
    return (math.pi / 2.0) * float(erfi_scaled(p)) * 2.0 * v1v2 * eta ** 2 * tau ** 2 \
        * (omega_up - omega_down) ** 2 * math.cos(2.0 * phi_half)


def total_logic_phase(omega_up, omega_down, eta, delta, tau, phi_half):
    """Logical phase of the gate.

    ``-(pi/2) exp(-p^2) erfi(p) eta^2 tau^2 (Omega_up - Omega_down)^2 cos(2 phi)``
    """
    return _logic_phase_kernel(_STRETCH[0] * _STRETCH[1], omega_up, omega_down, eta, delta, tau, phi_half)


def logic_phase_from_coefficients(coeffs, eta, delta, tau):
    """Logical phase summed from the four per-state phases."""
    ph = {s: logic_phase_coeff(a, eta, delta, tau) for s, a in coeffs.as_dict().items()}
    return ph["uu"] + ph["dd"] - ph["ud"] - ph["du"]


def pi_phase_solve(eta, delta, tau, ratio):
    """Omega_down giving a logical phase of magnitude pi.

    Solves ``exp(-p^2) erfi(p) eta^2 (Omega_up - Omega_down)^2 tau^2 / 2 = 1``
    with ``Omega_up = ratio * Omega_down``; returns the positive root.
    """
    if ratio == 1.0:
        raise DegenerateRatio("Omega_up = Omega_down gives no logical phase")
    p = delta * tau / SQRT2
    if not p > 0:
        raise DomainError("p = delta tau / sqrt2 must be > 0")
    return 1.0 / (abs(eta) * tau * abs(1.0 - ratio) * math.sqrt(0.5 * float(erfi_scaled(p))))


def fidelity_bound(p):
    """Upper bound pi / erfi(p) on the gate error from residual displacement."""
    if not p > 0:
        raise DomainError("p must be > 0")
    return math.pi * math.exp(-p * p) / float(erfi_scaled(p))


def heating_robustness(heating_rate, delta):
    """Quanta gained per revolution in phase space, (dn/dt) 2 pi / delta."""
    if not delta > 0:
        raise DomainError("delta must be > 0")
    return heating_rate * TWO_PI / delta


# -- trajectories -------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass
class PhaseTrajectory:
    """Sampled phase-space path of the stretch mode for each spin state.

    ``t`` is in units of tau. ``alpha[s]`` and ``phase[s]`` are arrays over
    ``t`` for ``s`` in ``("uu", "ud", "du", "dd")``.
    """

    p: float
    t: np.ndarray
    alpha: dict
    phase: dict
    phi_L: float
    alpha_final: dict = field(default_factory=dict)

    def max_excursion(self):
        return max(float(np.max(np.abs(a))) for a in self.alpha.values())

    def rows(self):
        """(state, t, Re alpha, Im alpha, phi) tuples in time order per state."""
        for s in ("uu", "ud", "du", "dd"):
            a = self.alpha[s]
            for i, ti in enumerate(self.t):
                yield s, float(ti), float(a[i].real), float(a[i].imag), float(self.phase[s][i])


def _accumulated_phase(t, amp, c):
    # Phi(t) = Im int alpha* dalpha for alpha(t) = amp (1 + erf(t - i c)), tau = 1
    if amp == 0:
        return np.zeros_like(t)
    a, b = t[:-1], t[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    s = mid[:, None] + half[:, None] * _GL_X[None, :]
    alpha = amp * (1.0 + erf_complex(s - 1j * c))
    dalpha = amp * (2.0 / SQRT_PI) * np.exp(-(s - 1j * c) ** 2)
    inc = (np.imag(np.conj(alpha) * dalpha) * _GL_W[None, :]).sum(axis=1) * half
    return np.concatenate(([0.0], np.cumsum(inc)))


def designed_trajectory(p, t_range=(-6.0, 6.0), n_samples=2000):
    """Trajectory of the designed pi-phase gate for a given ``p``.

    The drive strength is fixed by the pi-phase condition, which makes the
    path depend on ``p`` only::

        alpha_ud(t) = sqrt(pi) (1 + erf(t/tau - i p/sqrt2)) / (2 sqrt(erfi(p)))

    with ``alpha_du = -alpha_ud`` and ``alpha_uu = alpha_dd = 0``.

    Parameters
    ----------
    p : float
    t_range : (float, float)
        Window in units of tau.
    n_samples : int
    """
    if not p > 0:
        raise DomainError("p must be > 0")
    if n_samples < 2 or not t_range[0] < t_range[1]:
        raise DomainError("need n_samples >= 2 and an increasing window")
    t = np.linspace(t_range[0], t_range[1], n_samples)
    c = p / SQRT2
    # 1 / (2 sqrt(erfi(p))) without forming erfi(p) itself
    amp = SQRT_PI / (2.0 * math.exp(p * p / 2.0) * math.sqrt(float(erfi_scaled(p))))
    ud = amp * (1.0 + erf_complex(t - 1j * c))
    zero = np.zeros_like(ud)
    phase_ud = _accumulated_phase(t, amp, c)
    alpha = {"uu": zero, "ud": ud, "du": -ud, "dd": zero.copy()}
    phase = {"uu": np.zeros_like(t), "ud": phase_ud, "du": phase_ud.copy(), "dd": np.zeros_like(t)}
    phi_L = float(phase["uu"][-1] + phase["dd"][-1] - phase["ud"][-1] - phase["du"][-1])
    final = {s: complex(a[-1]) for s, a in alpha.items()}
    return PhaseTrajectory(p=p, t=t, alpha=alpha, phase=phase, phi_L=phi_L, alpha_final=final)


def winding_number(alpha):
    """Turns made by the direction of motion along a sampled path."""
    step = np.diff(np.asarray(alpha))
    step = step[np.abs(step) > 0]
    if step.size < 2:
        return 0.0
    return float(np.sum(np.diff(np.unwrap(np.angle(step))))) / TWO_PI


def lamb_dicke_validity(eta, trajectory):
    """Peak modulation depth, eta * max |alpha(t)|."""
    return abs(eta) * trajectory.max_excursion()


def phase_gate_matrix(phi_L):
    """diag(1, 1, 1, exp(i phi_L)) up to single-qubit Z rotations."""
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * phi_L)]).astype(complex)


# -- table design -------------------------------------------------------------

def n_limit(ctx, k):
    return int(math.floor(2.0 * k * equilibrium_distance(ctx) / math.pi))


def discrete_angle(ctx, k, n, allow_odd=False):
    """Beam angle gamma_n with 2 k cos(gamma_n) d = n pi."""
    if n != int(n) or n < 1:
        raise OutOfRange(f"n must be a positive integer, got {n}")
    if n % 2 and not allow_odd:
        raise OutOfRange(f"n = {n} is odd; pass allow_odd to use it")
    arg = n * math.pi / (2.0 * k * equilibrium_distance(ctx))
    if arg > 1.0:
        raise OutOfRange(f"n = {n} exceeds the limit {n_limit(ctx, k)}")
    return math.acos(arg)


def discrete_angles(ctx, k, n_max=None, allow_odd=False):
    """All admissible ``(n, gamma_n)`` up to ``n_max`` (default: the arccos limit)."""
    top = n_limit(ctx, k)
    if n_max is not None:
        if n_max > top:
            raise OutOfRange(f"n_max = {n_max} exceeds the limit {top}")
        top = n_max
    step = 1 if allow_odd else 2
    start = 1 if allow_odd else 2
    return [(n, discrete_angle(ctx, k, n, allow_odd)) for n in range(start, top + 1, step)]


@dataclass(frozen=True)
class GateDesign:
    """One row of a transport phase-gate parameter table (SI units)."""

    n: int
    gamma: float
    eta: float
    speed: float
    tau: float
    tau_text: float
    delta: float
    delta0: float
    omega_down: float
    omega_up: float
    p: float
    epsilon_bound: float
    delta_over_com: float
    transit_time: float
    tau_convention: str = TAU_TABLE

    def to_dict(self):
        return asdict(self)


def design_row(ctx, beam, p_target, ratio, n, allow_odd=False, cutoff_waists=2.6):
    """Design the gate for angle index ``n``.

    Order of solution: ``gamma_n`` from the angle quantisation, the speed from
    ``p = (delta0 - omega_str) tau / sqrt2`` on the blue branch with the table
    transit time ``tau = w0 / (2 sqrt2 v sin gamma)``, then ``eta`` and
    ``Omega_down`` from the pi-phase condition.

    Parameters
    ----------
    ctx : TrapContext
    beam : BeamGeometry
        Only the waist and wavelength are used.
    p_target : float
    ratio : float
        Omega_up / Omega_down.
    n : int
    allow_odd : bool
    cutoff_waists : float
        Distance from the beam centre, in waists, at which the transit starts
        and ends; sets ``transit_time``.

    Raises
    ------
    OutOfRange, NoSolution, DegenerateRatio
    """
    if not p_target > 0:
        raise DomainError("p_target must be > 0")
    k = beam.k
    w0 = beam.waist
    gamma = discrete_angle(ctx, k, n, allow_odd)
    sin_g, cos_g = math.sin(gamma), math.cos(gamma)
    denom = 2.0 * k * cos_g - 4.0 * p_target * sin_g / w0
    if not denom > 0:
        raise NoSolution(f"no positive speed reaches p = {p_target} at n = {n}")
    v = ctx.omega_str / denom
    tau = w0 / (2.0 * SQRT2 * v * sin_g)
    delta0 = doppler_detuning(k, v, gamma)
    delta = delta0 - ctx.omega_str
    geo = BeamGeometry(w0, beam.wavelength, gamma, COUNTER_PROPAGATING, beam.paraxial_limit)
    eta = lamb_dicke(ctx, geo)
    p = delta * tau / SQRT2
    omega_down = pi_phase_solve(eta, delta, tau, ratio)
    return GateDesign(
        n=n,
        gamma=gamma,
        eta=eta,
        speed=v,
        tau=tau,
        tau_text=2.0 * tau,
        delta=delta,
        delta0=delta0,
        omega_down=omega_down,
        omega_up=ratio * omega_down,
        p=p,
        epsilon_bound=fidelity_bound(p),
        delta_over_com=delta / ctx.omega_com,
        transit_time=2.0 * cutoff_waists * w0 / (v * sin_g),
    )


def design_table(ctx, beam, p_target, ratio, ns, allow_odd=False):
    """Design every ``n`` in ``ns``; failures come back as exception instances."""
    out = []
    for n in ns:
        try:
            out.append(design_row(ctx, beam, p_target, ratio, n, allow_odd))
        except DomainError as exc:
            out.append(exc)
    return out
