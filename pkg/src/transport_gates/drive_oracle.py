"""Brute-force evaluation of the displacement and phase integrals.

For a drive ``dalpha/dt = eta A(t) exp(i delta t)`` the oracle integrates
the displacement forward in time and accumulates the geometric phase
``Phi(t) = Im int alpha* dalpha`` on the same grid. It uses no closed
forms, so it checks the closed-form gate formulas and also handles envelopes
that have no closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as L
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ToleranceNotMet
from .numerics import erfc_real, integrate_adaptive

GAUSSIAN = "gaussian"
SQUARE = "square"
SAMPLED = "sampled"

_WINDOW_TAU = 8.0
_NODES = 16


def _spectral_rule(m):
    # nodes, weights and the matrix S with (S f)_j = int_{-1}^{x_j} f on [-1, 1]
    x, w = L.leggauss(m)
    V = L.legvander(x, m - 1)
    Vint = np.empty_like(V)
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        Vint[:, k] = L.legval(x, L.legint(e, lbnd=-1))
    return x, w, Vint @ np.linalg.inv(V)


_X, _W, _S = _spectral_rule(_NODES)


@dataclass(frozen=True)
class Envelope:
    """Drive envelope ``A(t)`` with its coupling and detuning.

    Use the :meth:`gaussian`, :meth:`square` and :meth:`sampled` constructors.
    """

    shape: str
    A0: complex
    eta: float
    delta: float
    tau: float = 0.0
    duration: float = 0.0
    times: tuple = ()
    amplitudes: tuple = ()
    interpolation: str = "cubic"
    _interp: object = field(default=None, repr=False, compare=False)

    @classmethod
    def gaussian(cls, A0, eta, delta, tau):
        if not tau > 0:
            raise DomainError("tau must be > 0")
        return cls(GAUSSIAN, A0, eta, delta, tau=tau)

    @classmethod
    def square(cls, A0, eta, delta, duration):
        """Constant drive ``A0`` on ``[0, duration]``."""
        if not duration > 0:
            raise DomainError("duration must be > 0")
        return cls(SQUARE, A0, eta, delta, duration=duration)

    @classmethod
    def sampled(cls, times, amplitudes, eta, delta, A0=1.0, interpolation="cubic"):
        """Envelope ``A0 * a(t)`` from samples; zero outside the sampled range.

        ``interpolation`` is ``"cubic"`` (monotone local cubic) or ``"linear"``.
        """
        t = np.asarray(times, dtype=float)
        a = np.asarray(amplitudes, dtype=float)
        if t.ndim != 1 or t.shape != a.shape or t.size < 2:
            raise DomainError("need matching 1-D times and amplitudes, at least 2 samples")
        if not np.all(np.diff(t) > 0):
            raise DomainError("sample times must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(a))):
            raise DomainError("samples must be finite")
        if interpolation == "cubic":
            interp = PchipInterpolator(t, a, extrapolate=False)
        elif interpolation == "linear":
            interp = None
        else:
            raise DomainError(f"unknown interpolation {interpolation!r}")
        return cls(SAMPLED, A0, eta, delta, times=tuple(t), amplitudes=tuple(a),
                   interpolation=interpolation, _interp=interp)

    def shape_function(self, t):
        t = np.asarray(t, dtype=float)
        if self.shape == GAUSSIAN:
            return np.exp(-(t / self.tau) ** 2)
        if self.shape == SQUARE:
            return ((t >= 0.0) & (t <= self.duration)).astype(float)
        ts = np.asarray(self.times)
        inside = (t >= ts[0]) & (t <= ts[-1])
        if self._interp is None:
            vals = np.interp(t, ts, np.asarray(self.amplitudes))
        else:
            vals = np.nan_to_num(self._interp(t))
        return np.where(inside, vals, 0.0)

    def drive(self, t):
        """``eta A(t) exp(i delta t)``."""
        t = np.asarray(t, dtype=float)
        return self.eta * self.A0 * self.shape_function(t) * np.exp(1j * self.delta * t)

    def window(self):
        if self.shape == GAUSSIAN:
            return -_WINDOW_TAU * self.tau, _WINDOW_TAU * self.tau
        if self.shape == SQUARE:
            return 0.0, self.duration
        return self.times[0], self.times[-1]

    def breakpoints(self):
        if self.shape == SQUARE:
            return (0.0, self.duration)
        if self.shape == SAMPLED:
            return self.times
        return (0.0,)

    def tail_bound(self, t0, t1):
        """Bound on |displacement| contributed outside ``[t0, t1]``."""
        if self.shape != GAUSSIAN:
            lo, hi = self.window()
            return 0.0 if (t0 <= lo and t1 >= hi) else math.inf
        scale = abs(self.eta * self.A0) * self.tau * math.sqrt(math.pi) / 2.0
        return scale * (erfc_real(-t0 / self.tau) + erfc_real(t1 / self.tau))

    def max_width(self):
        widths = []
        if self.delta != 0:
            widths.append(2.0 * math.pi / abs(self.delta))
        if self.shape == GAUSSIAN:
            widths.append(self.tau)
        return min(widths) if widths else None

    def interpolation_error(self):
        """Integrated gap between cubic and linear interpolants, times |eta A0|."""
        if self.shape != SAMPLED or self._interp is None:
            return 0.0
        ts = np.asarray(self.times)
        total = 0.0
        for a, b in zip(ts[:-1], ts[1:]):
            s = 0.5 * (a + b) + 0.5 * (b - a) * _X
            gap = np.abs(np.nan_to_num(self._interp(s)) - np.interp(s, ts, np.asarray(self.amplitudes)))
            total += 0.5 * (b - a) * float(_W @ gap)
        return abs(self.eta * self.A0) * total


@dataclass
class OracleResult:
    """Displacement and phase sampled at the panel boundaries of the adaptive grid."""

    t: np.ndarray
    alpha: np.ndarray
    phi: np.ndarray
    error_estimate: float
    panels_used: int

    @property
    def alpha_final(self):
        return complex(self.alpha[-1])

    @property
    def phi_final(self):
        return float(self.phi[-1])

    def alpha_at(self, t):
        """Displacement at a grid time (exact match required)."""
        idx = np.searchsorted(self.t, t)
        if idx >= self.t.size or self.t[idx] != t:
            raise KeyError(f"t = {t} is not a grid point; pass it in `times`")
        return complex(self.alpha[idx])


def _panel(env, a, b):
    # displacement change and phase change over [a, b] starting from alpha = 0
    half = 0.5 * (b - a)
    f = env.drive(0.5 * (a + b) + half * _X)
    local = half * (_S @ f)
    dalpha = half * complex(_W @ f)
    dphi = half * float(_W @ np.imag(np.conj(local) * f))
    return dalpha, dphi


def integrate_displacement(env, t0=None, t1=None, tol=1e-12, times=(), max_panels=100000):
    """Time-ordered integration of the displacement and phase.

    Parameters
    ----------
    env : Envelope
    t0, t1 : float, optional
        Integration window; defaults to the envelope's natural window
        (+-8 tau for a Gaussian, whose tail is then added to the error).
    tol : float
        Target bound on the accumulated error of alpha.
    times : sequence of float
        Extra grid points at which alpha and phi are reported.

    Returns
    -------
    OracleResult

    Raises
    ------
    ToleranceNotMet
        If ``max_panels`` is exhausted; the partial result is attached.
    """
    lo, hi = env.window()
    # truncation of the infinite transit only counts when the window is ours
    natural = t0 is None and t1 is None
    t0 = lo if t0 is None else float(t0)
    t1 = hi if t1 is None else float(t1)
    if not t0 < t1:
        raise DomainError("need t0 < t1")
    if not tol > 0:
        raise DomainError("tol must be > 0")

    cuts = sorted({t0, t1, *(x for x in (*env.breakpoints(), *times) if t0 < x < t1)})
    width = env.max_width()
    segments = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        m = 1 if width is None else max(1, math.ceil((b - a) / width))
        edges = np.linspace(a, b, m + 1)
        segments.extend(zip(edges[:-1], edges[1:]))

    span = t1 - t0
    alpha = 0j
    phi = 0.0
    err = 0.0
    ts, alphas, phis = [t0], [0j], [0.0]
    panels = 0
    failed = False
    # depth-first, left to right, so alpha is accumulated in time order
    stack = [(a, b, _panel(env, a, b)) for a, b in reversed(segments)]
    while stack:
        a, b, (da, dp) = stack.pop()
        mid = 0.5 * (a + b)
        da1, dp1 = _panel(env, a, mid)
        da2, dp2 = _panel(env, mid, b)
        fine_a = da1 + da2
        fine_p = dp1 + dp2 + float(np.imag(np.conj(da1) * da2))
        diff = max(abs(fine_a - da), abs(fine_p - dp))
        local_tol = tol * (b - a) / span
        panels += 1
        if diff > local_tol and panels < max_panels and mid not in (a, b):
            stack.append((mid, b, (da2, dp2)))
            stack.append((a, mid, (da1, dp1)))
            continue
        if diff > local_tol:
            failed = True
        phi += fine_p + float(np.imag(np.conj(alpha) * fine_a))
        alpha += fine_a
        err += diff
        ts.append(b)
        alphas.append(alpha)
        phis.append(phi)

    quad_err = err + (env.tail_bound(t0, t1) if natural else 0.0)
    result = OracleResult(np.array(ts), np.array(alphas), np.array(phis),
                          quad_err + env.interpolation_error(), panels)
    if failed or quad_err > tol:
        raise ToleranceNotMet(f"oracle error {err:.3e} exceeds tol {tol:.3e}", result)
    return result


def fourier_displacement(env, tol=1e-12):
    """Net displacement ``eta int A(t) exp(i delta t) dt`` by direct quadrature."""
    t0, t1 = env.window()
    res = integrate_adaptive(env.drive, t0, t1, tol, max_width=env.max_width(),
                             breakpoints=env.breakpoints(), tail_bound=env.tail_bound(t0, t1))
    return complex(res.value)


def square_pulse_closed_form(A0, eta, delta, t):
    """Analytic square-pulse displacement and phase at time ``t`` after switch-on."""
    g = eta * A0
    if delta == 0:
        return g * t, 0.0
    alpha = g * (np.exp(1j * delta * t) - 1.0) / (1j * delta)
    phi = abs(g / delta) ** 2 * (delta * t - math.sin(delta * t))
    return complex(alpha), float(phi)
