"""Laughlin-type trial wave functions assembled from edge correlators.

For n particles at real coordinates x_k and n poles z_l in the lower
half-plane (Im z_l < 0, pairwise distinct), the closed form is

    phi(x) = prod_{j<l} (x_l - x_j)^nu * prod_{l<k} (z_k - z_l)^nu
             / prod_{k,l} (x_k - z_l + i eps)^nu,

i.e. a Jastrow factor times the pole profile
Phi(x) = prod_l (x - z_l + i eps)^{-nu} attached to each particle.  At
nu = 1 the same object has two independent representations exercised
here:

 * a contour representation: each pole is produced by one auxiliary
   integral, and the full y-integral equals (-2 pi i)^n times the
   closed form (one clockwise residue per variable) — evaluated
   numerically by tensor Gauss-Legendre quadrature after the
   compactification y = L tan(u), which turns the 1/y^2 tails into a
   smooth integrand on a finite interval;
 * a Slater determinant det[x_k^j Phi(x_k)], whose ratio to the closed
   form is the x-independent Vandermonde of the poles.

A finite-temperature deformation replaces every factor involving a
particle coordinate by t -> (beta/pi) sinh(pi t / beta) (the pole
Vandermonde, an x-independent constant, stays undeformed); magnitudes
are tracked in scaled mantissa/log form so the exponential growth and
decay regimes stay representable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    DegenerateInputError,
    PreconditionError,
    UnsupportedOrderError,
)

__all__ = [
    "SlaterSpec",
    "QuadratureBudget",
    "SlaterComparison",
    "pole_factor",
    "laughlin_closed_form",
    "wavefunction_from_correlator",
    "slater_determinant_compare",
    "finite_temperature_wavefunction",
    "finite_temperature_log_abs",
    "RESIDUE_FACTOR",
]

# ratio of the contour representation to the closed form, per variable
RESIDUE_FACTOR = -2j * math.pi


@dataclass(frozen=True)
class SlaterSpec:
    """Statistics exponent nu, pole positions, and the edge smoothing."""

    nu: int
    poles: tuple
    eps: float = 0.0

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < 1:
            raise PreconditionError("nu must be a positive integer")
        if len(self.poles) == 0:
            raise PreconditionError("need at least one pole")
        if self.eps < 0:
            raise PreconditionError("smoothing parameter must be non-negative")
        for z in self.poles:
            if complex(z).imag >= 0:
                raise PreconditionError(
                    "poles must lie strictly in the lower half-plane"
                )
        if len(set(map(complex, self.poles))) != len(self.poles):
            raise DegenerateInputError("poles must be pairwise distinct")

    @property
    def num_particles(self) -> int:
        return len(self.poles)


@dataclass(frozen=True)
class QuadratureBudget:
    """Resolution knobs for the contour-representation quadrature."""

    nodes_per_dim: int = 160
    scale: float = 2.0
    rtol: float = 1e-6
    atol: float = 1e-30


@dataclass(frozen=True)
class SlaterComparison:
    closed_form: complex
    determinant: complex
    ratio: complex


def _check_coords(spec: SlaterSpec, xs) -> tuple:
    xs = tuple(float(x) for x in xs)
    if len(xs) != spec.num_particles:
        raise PreconditionError("need one coordinate per pole")
    return xs


def pole_factor(spec: SlaterSpec, x: float) -> complex:
    """Pole profile Phi(x) = prod_l (x - z_l + i eps)^{-nu}."""
    out = 1.0 + 0.0j
    for z in spec.poles:
        out /= (x - complex(z) + 1j * spec.eps) ** spec.nu
    return out


def laughlin_closed_form(spec: SlaterSpec, xs) -> complex:
    """Jastrow factor times pole profiles, see the module docstring."""
    xs = _check_coords(spec, xs)
    n = spec.num_particles
    nu = spec.nu
    value = 1.0 + 0.0j
    for j in range(n):
        for l in range(j + 1, n):
            value *= (xs[l] - xs[j]) ** nu
    for l in range(n):
        for k in range(l + 1, n):
            value *= (complex(spec.poles[k]) - complex(spec.poles[l])) ** nu
    for x in xs:
        value *= pole_factor(spec, x)
    return value


def _tan_map_nodes(num_nodes: int, scale: float):
    """Gauss-Legendre nodes for int_R f(y) dy with y = scale * tan(u)."""
    u, w = np.polynomial.legendre.leggauss(num_nodes)
    u = u * (0.5 * math.pi)
    w = w * (0.5 * math.pi)
    y = scale * np.tan(u)
    jac = scale / np.cos(u) ** 2
    return y, w * jac


def _contour_integral(spec: SlaterSpec, xs, num_nodes: int, scale: float) -> complex:
    """Tensor quadrature of the y-integrand at one resolution."""
    n = spec.num_particles
    eps = spec.eps
    y, wy = _tan_map_nodes(num_nodes, scale)
    zs = [complex(z) for z in spec.poles]
    if n == 1:
        vals = 1.0 / (y - zs[0])
        for x in xs:
            vals = vals / (x - y + 1j * eps)
        return complex(np.sum(wy * vals))
    if n == 2:
        y1 = y[:, None]
        y2 = y[None, :]
        w2 = wy[:, None] * wy[None, :]
        vals = (y2 - y1) / ((y1 - zs[0]) * (y2 - zs[1]))
        for x in xs:
            vals = vals / ((x - y1 + 1j * eps) * (x - y2 + 1j * eps))
        return complex(np.sum(w2 * vals))
    # n == 3: chunk over the first axis to keep the grids two-dimensional
    total = 0.0 + 0.0j
    y2 = y[:, None]
    y3 = y[None, :]
    w23 = wy[:, None] * wy[None, :]
    base23 = (y3 - y2) / ((y2 - zs[1]) * (y3 - zs[2]))
    for x in xs:
        base23 = base23 / ((x - y2 + 1j * eps) * (x - y3 + 1j * eps))
    for i in range(num_nodes):
        y1 = y[i]
        slab = base23 * ((y2 - y1) * (y3 - y1) / (y1 - zs[0]))
        for x in xs:
            slab = slab / (x - y1 + 1j * eps)
        total += wy[i] * complex(np.sum(w23 * slab))
    return total


def wavefunction_from_correlator(
    spec: SlaterSpec, xs, budget: QuadratureBudget = QuadratureBudget()
) -> complex:
    """Wave function from the contour representation (nu = 1, n <= 3).

    Returns the particle Vandermonde times the tensor y-integral; in
    exact arithmetic this equals RESIDUE_FACTOR**n times
    :func:`laughlin_closed_form` (one clockwise residue per integration
    variable).  The integral is evaluated at two resolutions and the
    difference serves as the error estimate; if it exceeds
    rtol * |value| + atol an :class:`AccuracyError` is raised.
    """
    if spec.nu != 1:
        raise UnsupportedOrderError("the contour representation is wired for nu = 1")
    n = spec.num_particles
    if n > 3:
        raise UnsupportedOrderError("contour quadrature supports up to 3 particles")
    xs = _check_coords(spec, xs)
    fine = _contour_integral(spec, xs, budget.nodes_per_dim, budget.scale)
    coarse_nodes = max(8, int(0.75 * budget.nodes_per_dim))
    coarse = _contour_integral(spec, xs, coarse_nodes, budget.scale)
    err = abs(fine - coarse)
    if err > budget.rtol * abs(fine) + budget.atol:
        raise AccuracyError(
            f"quadrature error estimate {err:.3e} exceeds budget at "
            f"{budget.nodes_per_dim} nodes/dim; raise nodes_per_dim"
        )
    vand = 1.0
    for j in range(n):
        for l in range(j + 1, n):
            vand *= xs[l] - xs[j]
    return vand * fine


def slater_determinant_compare(spec: SlaterSpec, xs) -> SlaterComparison:
    """Free-fermion cross-check: det[x_k^j Phi(x_k)] vs the closed form.

    The ratio closed/determinant is the pole Vandermonde
    prod_{l<k}(z_k - z_l), independent of the particle coordinates.
    """
    if spec.nu != 1:
        raise UnsupportedOrderError("the Slater comparison applies at nu = 1")
    xs = _check_coords(spec, xs)
    n = spec.num_particles
    mat = np.empty((n, n), dtype=complex)
    for k, x in enumerate(xs):
        phi = pole_factor(spec, x)
        for j in range(n):
            mat[k, j] = x**j * phi
    det = complex(np.linalg.det(mat))
    closed = laughlin_closed_form(spec, xs)
    if det == 0:
        raise DegenerateInputError("coincident coordinates collapse the determinant")
    return SlaterComparison(closed_form=closed, determinant=det, ratio=closed / det)


# ---------------------------------------------------------------------------
# Finite temperature


def _scaled_sinh(w: complex) -> tuple[complex, float]:
    """sinh(w) as (mantissa, log_scale) with sinh(w) = mantissa * e^log_scale.

    For |Re w| beyond 30 the direct form is replaced by
    sign * e^{|Re w|} e^{i sign Im w} (1 - e^{-2|Re w| ...})/2, which
    keeps the phase exact where e^{Re w} would overflow.
    """
    sign = 1.0 if w.real >= 0 else -1.0
    wp = w * sign
    if wp.real < 30.0:
        return cmath.sinh(w), 0.0
    mant = sign * 0.5 * cmath.exp(1j * wp.imag) * (1.0 - cmath.exp(-2.0 * wp))
    return mant, wp.real


class _ScaledProduct:
    """Running product kept as unit-magnitude mantissa plus log magnitude."""

    def __init__(self):
        self.mantissa = 1.0 + 0.0j
        self.log_magnitude = 0.0
        self.zero = False

    def multiply(self, mantissa: complex, log_scale: float, power: int):
        if self.zero:
            return
        if mantissa == 0:
            self.zero = True
            return
        self.log_magnitude += power * (math.log(abs(mantissa)) + log_scale)
        phase = mantissa / abs(mantissa)
        self.mantissa *= phase**power
        m = abs(self.mantissa)
        if m != 1.0:
            self.log_magnitude += math.log(m)
            self.mantissa /= m


def _thermal_factor(t: complex, beta: float) -> tuple[complex, float]:
    """(beta/pi) sinh(pi t / beta) in scaled form."""
    mant, scale = _scaled_sinh(math.pi * t / beta)
    return mant * (beta / math.pi), scale


def _finite_temperature_scaled(spec: SlaterSpec, xs, beta: float) -> _ScaledProduct:
    xs = _check_coords(spec, xs)
    if beta <= 0:
        raise PreconditionError("temperature deformation needs beta > 0")
    n = spec.num_particles
    nu = spec.nu
    acc = _ScaledProduct()
    for j in range(n):
        for l in range(j + 1, n):
            mant, scale = _thermal_factor(complex(xs[l] - xs[j]), beta)
            acc.multiply(mant, scale, nu)
    for l in range(n):
        for k in range(l + 1, n):
            # the pole Vandermonde is an x-independent constant: undeformed
            acc.multiply(complex(spec.poles[k]) - complex(spec.poles[l]), 0.0, nu)
    for x in xs:
        for z in spec.poles:
            mant, scale = _thermal_factor(x - complex(z) + 1j * spec.eps, beta)
            acc.multiply(mant, scale, -nu)
    return acc


def finite_temperature_wavefunction(spec: SlaterSpec, xs, beta: float) -> complex:
    """Thermally deformed wave function; beta = inf recovers the closed form.

    Raises :class:`AccuracyError` when the magnitude overflows the double
    range (use :func:`finite_temperature_log_abs` in that regime);
    underflow returns 0.
    """
    if math.isinf(beta):
        return laughlin_closed_form(spec, xs)
    acc = _finite_temperature_scaled(spec, xs, beta)
    if acc.zero:
        return 0.0 + 0.0j
    if acc.log_magnitude > 709.0:
        raise AccuracyError(
            "finite-temperature magnitude overflows; use the log-magnitude form"
        )
    if acc.log_magnitude < -745.0:
        return 0.0 + 0.0j
    return acc.mantissa * math.exp(acc.log_magnitude)


def finite_temperature_log_abs(spec: SlaterSpec, xs, beta: float) -> float:
    """log |finite-temperature wave function|; -inf at exact zeros."""
    if math.isinf(beta):
        val = laughlin_closed_form(spec, xs)
        return math.log(abs(val)) if val != 0 else -math.inf
    acc = _finite_temperature_scaled(spec, xs, beta)
    if acc.zero:
        return -math.inf
    return acc.log_magnitude
