"""Single particle in a perpendicular magnetic field plus a planar
harmonic trap.

The Hamiltonian, in symmetric gauge and units where mass and charge are
absorbed,

    H = 1/2 [ (p1 + B x2/2)^2 + (p2 - B x1/2)^2 ] + E (x1^2 + x2^2)/2,

separates into two decoupled oscillators once B is replaced by the
effective field b = sqrt(B^2 + 4E) inside the canonical combinations:

    q    = p1 + b x2/2        p    = p2 - b x1/2
    qbar = x1/2 + p2/b        pbar = p1/b - x2/2

with (q, p) and (qbar, pbar) mutually commuting canonical pairs.  In the
mode amplitudes a = (q + i p)/sqrt(2 b) and c = (qbar + i pbar) sqrt(b/2)
the Hamiltonian is omega_c |a|^2 + omega_h |c|^2 with

    omega_c = (b + B)/2  (fast, cyclotron-like)
    omega_h = (b - B)/2  (slow, trap-induced drift)

so a classical trajectory is two circles traversed at the two
frequencies, and the quantum spectrum is

    E(n, m) - E(0, 0) = n omega_c + m omega_h,   E(0, 0) = b/2.

omega_h is evaluated as 2E/(b + B), which is exact in the same algebra
but avoids the catastrophic cancellation of (b - B)/2 when E << B^2.

Eigenfunctions are evaluated in closed Laguerre form.  With u = b r^2/2,
l = m - n, z = x1 + i x2:

    Psi_{n,m} = (-1)^{max(n,m)} sqrt(min(n,m)!/max(n,m)!) sqrt(b/2 pi)
                * (b/2)^{|l|/2} * (z^l if l >= 0 else zbar^{|l|})
                * L_{min(n,m)}^{(|l|)}(u) * exp(-u/2),

an orthonormal family with angular momentum m - n.  The log-domain
evaluation keeps magnitudes finite for large n, m, r.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaincc, gammaln, logsumexp

from .errors import AccuracyError, PreconditionError

__all__ = [
    "FieldConfig",
    "PhasePoint",
    "effective_field",
    "spectrum",
    "ground_state_energy",
    "eval_wavefunction",
    "lll_density",
    "hamiltonian",
    "mode_amplitudes",
    "point_from_modes",
    "evolve",
    "sample_trajectory",
]


@dataclass(frozen=True)
class FieldConfig:
    """Magnetic field B, trap curvature E, and derived frequencies."""

    magnetic_field: float
    trap_strength: float
    effective_field: float
    omega_fast: float
    omega_slow: float


@dataclass(frozen=True)
class PhasePoint:
    """Classical phase-space point (x1, x2, p1, p2)."""

    x1: float
    x2: float
    p1: float
    p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.p1, self.p2], dtype=float)


def effective_field(magnetic_field: float, trap_strength: float) -> FieldConfig:
    """Build a :class:`FieldConfig` from B >= 0 and E >= 0 (not both zero).

    The slow frequency is computed as 2E/(b + B); for E << B^2 the naive
    (b - B)/2 loses roughly half the significant digits.
    """
    B = float(magnetic_field)
    E = float(trap_strength)
    if B < 0 or E < 0:
        raise PreconditionError("field strengths must be non-negative")
    if B == 0 and E == 0:
        raise PreconditionError("B and E cannot both vanish (free particle)")
    b = math.hypot(B, 2.0 * math.sqrt(E))
    omega_fast = 0.5 * (b + B)
    omega_slow = 2.0 * E / (b + B)
    return FieldConfig(B, E, b, omega_fast, omega_slow)


def ground_state_energy(config: FieldConfig) -> float:
    """Absolute energy of the (n, m) = (0, 0) state, b/2."""
    return 0.5 * config.effective_field


def spectrum(n: int, m: int, config: FieldConfig) -> float:
    """Excitation energy E(n, m) - E(0, 0) = n omega_fast + m omega_slow."""
    if n < 0 or m < 0:
        raise PreconditionError("quantum numbers must be non-negative")
    return n * config.omega_fast + m * config.omega_slow


def eval_wavefunction(n: int, m: int, config: FieldConfig, x1, x2):
    """Evaluate the orthonormal eigenfunction Psi_{n,m} at (x1, x2).

    Broadcasts over array input; returns complex.  Angular momentum of
    the state is m - n.
    """
    if n < 0 or m < 0:
        raise PreconditionError("quantum numbers must be non-negative")
    b = config.effective_field
    if b <= 0:
        raise PreconditionError("effective field must be positive")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    r2 = x1 * x1 + x2 * x2
    u = 0.5 * b * r2
    ell = m - n
    k = abs(ell)
    nr = min(n, m)

    lag = eval_genlaguerre(nr, k, u)
    # log-domain magnitude; the radial power r^k handled as (u)^{k/2}
    # together with its (b/2)^{k/2} prefactor: (b/2)^{k/2} r^k = u^{k/2}.
    log_coeff = 0.5 * (
        gammaln(nr + 1) - gammaln(max(n, m) + 1) + math.log(b / (2.0 * math.pi))
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        log_radial = np.where(u > 0, 0.5 * k * np.log(np.where(u > 0, u, 1.0)), 0.0)
        log_mag = log_coeff + log_radial - 0.5 * u + np.log(np.abs(lag))
        mag = np.where(lag == 0, 0.0, np.exp(log_mag))
    if k > 0:
        mag = np.where(u > 0, mag, 0.0)

    phi = np.arctan2(x2, x1)
    phase = np.exp(1j * ell * phi)
    sign = -1.0 if (max(n, m) % 2) else 1.0
    out = sign * np.sign(lag) * mag * phase
    if out.ndim == 0:
        return complex(out)
    return out


def lll_density(m_max: int, config: FieldConfig, x1, x2):
    """Particle density of the filled lowest band, states m = 0..m_max.

    Equals (b/2 pi) e^{-u} sum_{m<=m_max} u^m/m! with u = b r^2/2, i.e.
    (b/2 pi) times the regularized upper incomplete gamma
    Q(m_max + 1, u).  Evaluated by logsumexp for stability at large m, u.
    """
    if m_max < 0:
        raise PreconditionError("m_max must be non-negative")
    b = config.effective_field
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = 0.5 * b * (x1 * x1 + x2 * x2)
    ms = np.arange(m_max + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_u = np.where(u > 0, np.log(np.where(u > 0, u, 1.0)), -np.inf)
        terms = ms * log_u[..., None] - u[..., None] - gammaln(ms + 1)
        # m = 0 contributes -u even at u = 0 where m*log(u) is 0 * -inf
        terms[..., 0] = -u
        dens = (b / (2.0 * math.pi)) * np.exp(logsumexp(terms, axis=-1))
    if np.any(~np.isfinite(dens)):
        raise AccuracyError("density evaluation produced non-finite values")
    if dens.ndim == 0:
        return float(dens)
    return dens


def lll_density_closed_form(m_max: int, config: FieldConfig, x1, x2):
    """Same density via the regularized incomplete gamma (cross-check route)."""
    b = config.effective_field
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    u = 0.5 * b * (x1 * x1 + x2 * x2)
    out = (b / (2.0 * math.pi)) * gammaincc(m_max + 1, u)
    if out.ndim == 0:
        return float(out)
    return out


def hamiltonian(point: PhasePoint, config: FieldConfig) -> float:
    """Classical energy of a phase-space point."""
    B = config.magnetic_field
    E = config.trap_strength
    v1 = point.p1 + 0.5 * B * point.x2
    v2 = point.p2 - 0.5 * B * point.x1
    return 0.5 * (v1 * v1 + v2 * v2) + 0.5 * E * (point.x1**2 + point.x2**2)


def mode_amplitudes(point: PhasePoint, config: FieldConfig) -> tuple[complex, complex]:
    """Complex amplitudes (a, c) of the fast and slow modes.

    H = omega_fast |a|^2 + omega_slow |c|^2, and the flow is
    a(t) = a e^{-i omega_fast t}, c(t) = c e^{-i omega_slow t}.
    """
    b = config.effective_field
    q = point.p1 + 0.5 * b * point.x2
    p = point.p2 - 0.5 * b * point.x1
    qbar = 0.5 * point.x1 + point.p2 / b
    pbar = point.p1 / b - 0.5 * point.x2
    a = (q + 1j * p) / math.sqrt(2.0 * b)
    c = (qbar + 1j * pbar) * math.sqrt(0.5 * b)
    return a, c


def point_from_modes(a: complex, c: complex, config: FieldConfig) -> PhasePoint:
    """Invert :func:`mode_amplitudes`."""
    b = config.effective_field
    q = math.sqrt(2.0 * b) * a.real
    p = math.sqrt(2.0 * b) * a.imag
    qbar = math.sqrt(2.0 / b) * c.real
    pbar = math.sqrt(2.0 / b) * c.imag
    p1 = 0.5 * (q + b * pbar)
    x2 = (q - b * pbar) / b
    p2 = 0.5 * (b * qbar + p)
    x1 = qbar - p / b
    return PhasePoint(x1, x2, p1, p2)


def _force(state: np.ndarray, config: FieldConfig) -> np.ndarray:
    x1, x2, p1, p2 = state
    B = config.magnetic_field
    E = config.trap_strength
    v1 = p1 + 0.5 * B * x2
    v2 = p2 - 0.5 * B * x1
    return np.array([v1, v2, 0.5 * B * v2 - E * x1, -0.5 * B * v1 - E * x2])


def _rk4_step(state: np.ndarray, dt: float, config: FieldConfig) -> np.ndarray:
    k1 = _force(state, config)
    k2 = _force(state + 0.5 * dt * k1, config)
    k3 = _force(state + 0.5 * dt * k2, config)
    k4 = _force(state + dt * k3, config)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(
    point: PhasePoint,
    config: FieldConfig,
    t: float,
    method: str = "analytic",
    step: float | None = None,
    energy_tol: float = 1e-8,
) -> PhasePoint:
    """Propagate a phase point to time t.

    method="analytic" rotates the two mode amplitudes exactly;
    method="rk4" integrates the Hamiltonian flow with a fixed step
    (default: a four-hundredth of the fast period) and raises
    :class:`AccuracyError` if the energy drifts by more than
    energy_tol * max(1, |H(0)|).
    """
    if method == "analytic":
        a, c = mode_amplitudes(point, config)
        a *= cmath.exp(-1j * config.omega_fast * t)
        c *= cmath.exp(-1j * config.omega_slow * t)
        return point_from_modes(a, c, config)
    if method != "rk4":
        raise PreconditionError(f"unknown integration method {method!r}")
    if t == 0:
        return point
    h = step if step is not None else (2.0 * math.pi / config.omega_fast) / 400.0
    nsteps = max(1, math.ceil(abs(t) / h))
    dt = t / nsteps
    state = point.as_array()
    e0 = hamiltonian(point, config)
    for _ in range(nsteps):
        state = _rk4_step(state, dt, config)
    out = PhasePoint(*state)
    drift = abs(hamiltonian(out, config) - e0)
    if drift > energy_tol * max(1.0, abs(e0)):
        raise AccuracyError(
            f"rk4 energy drift {drift:.3e} exceeds tolerance; reduce the step"
        )
    return out


def sample_trajectory(
    point: PhasePoint,
    config: FieldConfig,
    t_final: float,
    num_samples: int,
    method: str = "analytic",
    step: float | None = None,
    energy_tol: float = 1e-8,
) -> tuple[np.ndarray, np.ndarray]:
    """Trajectory sampled at num_samples uniform times on [0, t_final].

    Returns (times, states) with states of shape (num_samples, 4).  For
    rk4 the step is refined to divide the sample interval exactly, so
    samples land on integration nodes.
    """
    if num_samples < 2:
        raise PreconditionError("need at least two samples")
    times = np.linspace(0.0, t_final, num_samples)
    states = np.empty((num_samples, 4), dtype=float)
    states[0] = point.as_array()
    if method == "analytic":
        a0, c0 = mode_amplitudes(point, config)
        for i, t in enumerate(times[1:], start=1):
            a = a0 * cmath.exp(-1j * config.omega_fast * t)
            c = c0 * cmath.exp(-1j * config.omega_slow * t)
            states[i] = point_from_modes(a, c, config).as_array()
        return times, states
    if method != "rk4":
        raise PreconditionError(f"unknown integration method {method!r}")
    dt_sample = t_final / (num_samples - 1)
    h = step if step is not None else (2.0 * math.pi / config.omega_fast) / 400.0
    sub = max(1, math.ceil(abs(dt_sample) / h))
    dt = dt_sample / sub
    state = point.as_array()
    e0 = hamiltonian(point, config)
    for i in range(1, num_samples):
        for _ in range(sub):
            state = _rk4_step(state, dt, config)
        states[i] = state
    drift = abs(hamiltonian(PhasePoint(*states[-1]), config) - e0)
    if drift > energy_tol * max(1.0, abs(e0)):
        raise AccuracyError(
            f"rk4 energy drift {drift:.3e} exceeds tolerance; reduce the step"
        )
    return times, states
