"""Tests for the bosonization module.

Oracles: mpmath evaluations of the closed propagator, the displacement
matrix-element closed form (Laguerre polynomials), hand-expanded
single-mode displacement algebra, and exact scaling laws in the
smoothing parameter.  The brute-force oscillator construction and the
Gaussian closed formula check each other at matched mode cutoff, and
the brute-force route is separately shown to converge to the exact
formula as the cutoff grows.
"""

import cmath
import math

import numpy as np
import pytest

from hall_edge import bosonization as bz
from hall_edge import fock_space as fk
from hall_edge.errors import (
    DegenerateInputError,
    PreconditionError,
    ResourceLimitError,
)

# mpmath, 30 digits: -ln(1 - e^-0.01) and (1-e^-0.01)/(1+e^-0.01)
PROPAGATOR_AT_0_EPS_001 = 4.6101660193248969181
VERTEX_PAIR_AT_PI_EPS_001 = 0.0049999583337499957838


def test_propagator_frozen_and_mpmath():
    import mpmath as mp

    got = bz.propagator(0.0, 0.01)
    assert got.real == pytest.approx(PROPAGATOR_AT_0_EPS_001, rel=1e-14)
    assert got.imag == 0.0
    mp.mp.dps = 30
    for delta in (0.0, 0.7, math.pi, -2.1):
        for eps in (0.01, 0.1, 1.0):
            want = -mp.log(1 - mp.e ** (1j * mp.mpf(delta) - mp.mpf(eps)))
            have = bz.propagator(delta, eps)
            assert have.real == pytest.approx(float(want.real), rel=1e-13)
            assert have.imag == pytest.approx(float(want.imag), rel=1e-13, abs=1e-15)


def test_propagator_series_cutoff():
    delta, eps, P = 0.9, 0.25, 37
    got = bz.propagator(delta, eps, series_cutoff=P)
    want = sum(
        cmath.exp((1j * delta - eps) * p) / p for p in range(1, P + 1)
    )
    assert got == pytest.approx(want, rel=1e-14)
    with pytest.raises(PreconditionError):
        bz.propagator(0.0, 0.1, series_cutoff=0)
    with pytest.raises(PreconditionError):
        bz.propagator(0.0, -0.1)
    with pytest.raises(PreconditionError):
        bz.propagator(0.0, 0.0)


def test_vertex_pair_frozen_value():
    got = bz.vertex_two_point(1.0, math.pi, 0.0, 0.01)
    assert got.real == pytest.approx(VERTEX_PAIR_AT_PI_EPS_001, rel=1e-13)
    assert got.imag == pytest.approx(0.0, abs=1e-16)


def test_vertex_coincident_neutral_pair_is_exactly_one():
    for alpha in (0.5, 1.0, 2.3):
        got = bz.vertex_two_point(alpha, 1.234, 1.234, 0.05)
        assert got == 1.0 + 0.0j


def test_vertex_symmetries():
    spec = bz.CorrelatorSpec((1.0, -0.5, -0.5), (0.1, 1.3, -2.0), 0.2)
    base = bz.vertex_n_point(spec)
    # global charge conjugation
    conj_charges = bz.CorrelatorSpec((-1.0, 0.5, 0.5), (0.1, 1.3, -2.0), 0.2)
    assert bz.vertex_n_point(conj_charges) == base
    # rigid rotation of all angles
    shifted = bz.CorrelatorSpec((1.0, -0.5, -0.5), (0.1 + 0.7, 1.3 + 0.7, -2.0 + 0.7), 0.2)
    assert bz.vertex_n_point(shifted) == pytest.approx(base, rel=1e-13)
    # reflection conjugates
    mirrored = bz.CorrelatorSpec((1.0, -0.5, -0.5), (-0.1, -1.3, 2.0), 0.2)
    assert bz.vertex_n_point(mirrored) == pytest.approx(base.conjugate(), rel=1e-13)


def test_vertex_eps_scaling_orders():
    # fused cluster of total charge 2 dies as eps^{Q^2/2} = eps^2
    fused = lambda e: abs(
        bz.vertex_n_point(bz.CorrelatorSpec((1.0, 1.0), (0.3, 0.3), e))
    )
    slope = math.log(fused(1e-3) / fused(1e-4)) / math.log(10.0)
    assert slope == pytest.approx(2.0, abs=0.01)
    # separated insertions carry the engineering power sum(alpha^2)/2 = 1
    apart = lambda e: abs(
        bz.vertex_n_point(bz.CorrelatorSpec((1.0, 1.0), (0.3, 2.0), e))
    )
    slope2 = math.log(apart(1e-4) / apart(1e-5)) / math.log(10.0)
    assert slope2 == pytest.approx(1.0, abs=0.01)


def test_vertex_full_diagnostics():
    res = bz.vertex_n_point_full(bz.CorrelatorSpec((1.0, 1.0), (0.3, 2.0), 0.1))
    assert res.total_charge == pytest.approx(2.0)
    assert not res.neutral
    assert res.vanishing_order == pytest.approx(2.0)
    assert res.prefactor_order == pytest.approx(1.0)
    res2 = bz.vertex_n_point_full(bz.CorrelatorSpec((1.0, -1.0), (0.3, 2.0), 0.1))
    assert res2.neutral
    assert res2.vanishing_order == 0.0


def test_spec_validation():
    with pytest.raises(PreconditionError):
        bz.CorrelatorSpec((1.0,), (0.0, 1.0), 0.1)
    with pytest.raises(PreconditionError):
        bz.CorrelatorSpec((), (), 0.1)
    with pytest.raises(PreconditionError):
        bz.CorrelatorSpec((1.0,), (0.0,), 0.0)


def test_boson_mode_normalization_from_currents():
    """The current correlators fix c_p = j_{-p}/sqrt(p) as canonical modes."""
    win = fk.ModeWindow(20)
    state = fk.QuasiFreeState.ground()
    for p in (1, 2, 3, 7):
        # <c_p c_p^dag> = <j_{-p} j_{+p}> / p = 1
        assert fk.current_two_point(-p, -p, win, state) == pytest.approx(float(p), abs=0)
        # <c_p^dag c_p> = <j_p j_{-p}> / p = 0
        assert fk.current_two_point(p, p, win, state) == 0.0
        # [c_p, c_p^dag] = -<[j_p, j_{-p}]>/p = 1
        assert fk.commutator_central_term(p, -p, win, state) == complex(-p)


def _displacement_closed_form(mu: complex, rows: int, cols: int) -> np.ndarray:
    """Matrix elements <m|D(mu)|n> via the Laguerre closed form."""
    from scipy.special import eval_genlaguerre

    out = np.empty((rows, cols), dtype=complex)
    x = abs(mu) ** 2
    for m in range(rows):
        for n in range(cols):
            if m >= n:
                coeff = math.sqrt(math.factorial(n) / math.factorial(m))
                val = coeff * mu ** (m - n) * eval_genlaguerre(n, m - n, x)
            else:
                coeff = math.sqrt(math.factorial(m) / math.factorial(n))
                val = coeff * (-mu.conjugate()) ** (n - m) * eval_genlaguerre(m, n - m, x)
            out[m, n] = val * math.exp(-0.5 * x)
    return out


def test_displacement_matrix_against_laguerre_formula():
    from scipy.linalg import expm

    rng = np.random.default_rng(9)
    for _ in range(4):
        mu = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        dim = 40
        a = np.diag(np.sqrt(np.arange(1.0, dim)), 1)
        big = expm(mu * a.T - mu.conjugate() * a)
        want = _displacement_closed_form(mu, 8, 8)
        assert np.max(np.abs(big[:8, :8] - want)) < 1e-12


def test_brute_force_single_mode_closed_form():
    spec = bz.CorrelatorSpec((1.0, -1.0, 0.5), (0.4, 1.9, -0.8), 0.3)
    got = bz.brute_force_vertex(spec, 1, 24)
    mus = [
        -alpha * math.exp(-0.5 * spec.eps) * cmath.exp(-1j * theta)
        for alpha, theta in zip(spec.charges, spec.angles)
    ]
    expo = -0.5 * sum(abs(m) ** 2 for m in mus)
    for r in range(len(mus)):
        for s in range(r + 1, len(mus)):
            expo -= mus[r].conjugate() * mus[s]
    assert got == pytest.approx(cmath.exp(expo), rel=1e-12)


def test_brute_force_matches_truncated_formula():
    pair = bz.CorrelatorSpec((1.0, -1.0), (0.7, 2.1), 0.1)
    got = bz.brute_force_vertex(pair, 60, 18)
    want = bz.vertex_n_point(pair, series_cutoff=60)
    assert abs(got - want) / abs(want) < 1e-12

    four = bz.CorrelatorSpec((1.5, -1.0, 0.5, -1.0), (-2.5, -1.0, 0.3, 2.0), 0.1)
    got4 = bz.brute_force_vertex(four, 100, 15)
    want4 = bz.vertex_n_point(four, series_cutoff=100)
    assert abs(got4 - want4) / abs(want4) < 1e-6


def test_brute_force_converges_to_exact_formula():
    pair = bz.CorrelatorSpec((1.0, -1.0), (0.7, 2.1), 0.1)
    exact = bz.vertex_n_point(pair)
    errs = {}
    for P in (50, 150, 210):
        errs[P] = abs(bz.brute_force_vertex(pair, P, 15) - exact) / abs(exact)
    assert errs[50] > errs[150] > errs[210]
    assert errs[150] < 1e-6
    assert errs[210] < 1e-8


def test_brute_force_guards():
    spec = bz.CorrelatorSpec((1.0, -1.0), (0.0, 1.0), 0.1)
    with pytest.raises(ResourceLimitError):
        bz.brute_force_vertex(spec, 100, 15, budget=100)
    with pytest.raises(PreconditionError):
        bz.brute_force_vertex(spec, 0, 15)
    with pytest.raises(PreconditionError):
        bz.brute_force_vertex(spec, 10, 0)


def test_anyon_single_pair_frozen_value():
    spec = bz.AnyonSpec(1, (0.0,), (0.0,), 0.1)
    assert bz.anyon_2n_point(spec) == pytest.approx(10.0 + 0.0j, rel=1e-14)


def _separated_points(rng, n, min_gap=0.3, max_gap=1.0):
    """Sorted points with pairwise gaps in [min_gap, max_gap]: keeps the
    determinant comparison away from cancellation-dominated regimes."""
    start = rng.uniform(-3, -1)
    return tuple(start + np.cumsum(rng.uniform(min_gap, max_gap, n)))


def test_anyon_cauchy_determinant_identity():
    rng = np.random.default_rng(31)
    for n in (2, 3, 4, 6):
        for _ in range(5):
            xs = _separated_points(rng, n)
            ys = _separated_points(rng, n)
            eps = rng.uniform(0.2, 0.8)
            spec = bz.AnyonSpec(1, xs, ys, eps)
            block = bz.anyon_2n_point(spec)
            det = bz.kernel_determinant(spec)
            assert abs(det - block) / abs(block) < 1e-10


def test_anyon_power_identity():
    rng = np.random.default_rng(12)
    xs = tuple(np.sort(rng.uniform(-2, 2, 3)))
    ys = tuple(np.sort(rng.uniform(-2, 2, 3)))
    base = bz.anyon_2n_point(bz.AnyonSpec(1, xs, ys, 0.4))
    for nu in range(2, 6):
        got = bz.anyon_2n_point(bz.AnyonSpec(nu, xs, ys, 0.4))
        assert abs(got - base**nu) / abs(base**nu) < 1e-10


def test_exchange_phase_exact_two_pairs():
    for nu in range(1, 7):
        spec = bz.AnyonSpec(nu, (0.37, -1.22), (0.9, -0.5), 0.31)
        assert bz.exchange_phase(spec) == complex((-1.0) ** nu)


def test_exchange_phase_three_pairs_near_exact():
    rng = np.random.default_rng(8)
    for nu in (1, 2, 3):
        for _ in range(5):
            xs = tuple(rng.uniform(-2, 2, 3))
            ys = tuple(rng.uniform(-2, 2, 3))
            spec = bz.AnyonSpec(nu, xs, ys, 0.5)
            i, j = sorted(rng.choice(3, size=2, replace=False))
            got = bz.exchange_phase(spec, int(i), int(j))
            assert abs(got - (-1.0) ** nu) < 1e-12


def test_exchange_phase_guards():
    spec = bz.AnyonSpec(1, (0.5, 0.5), (0.0, 1.0), 0.2)
    with pytest.raises(DegenerateInputError):
        bz.exchange_phase(spec)
    ok = bz.AnyonSpec(1, (0.5, 0.6), (0.0, 1.0), 0.2)
    with pytest.raises(PreconditionError):
        bz.exchange_phase(ok, 0, 0)
    with pytest.raises(PreconditionError):
        bz.kernel_determinant(bz.AnyonSpec(2, (0.0,), (1.0,), 0.2))


def test_anyon_non_integer_statistics_warns():
    spec = bz.AnyonSpec(1.5, (0.2,), (-0.3,), 0.2)
    with pytest.warns(bz.ApproximationWarning):
        val = bz.anyon_2n_point(spec)
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def _dressed_block(spec: bz.AnyonSpec) -> complex:
    """Small-velocity limit of the rescaled vertex: + i eps in every factor."""
    n, nu, e = spec.pair_count, spec.nu, spec.eps
    num = 1.0 + 0.0j
    for k in range(n):
        for l in range(k + 1, n):
            num *= complex(spec.xs[k] - spec.xs[l], e) ** nu
            num *= complex(spec.ys[k] - spec.ys[l], e) ** nu
    den = 1.0 + 0.0j
    for k in range(n):
        for l in range(n):
            den *= complex(spec.xs[k] - spec.ys[l], e) ** nu
    return num / ((-1j) ** (n * nu) * den)


def test_rescaled_vertex_reaches_anyon_block():
    spec = bz.AnyonSpec(2, (0.0, 1.1), (-0.4, 0.7), 1e-3)
    dressed = _dressed_block(spec)
    devs = {}
    for v in (2e-3, 1e-3):
        vspec, norm = bz.rescaled_vertex_spec(spec, v)
        assert norm == spec.eps ** (-spec.pair_count * spec.nu)
        devs[v] = abs(norm * bz.vertex_n_point(vspec) / dressed - 1.0)
    # leading deviation is linear in the velocity
    assert devs[2e-3] / devs[1e-3] == pytest.approx(2.0, abs=0.1)
    # and the dressed limit is itself eps-close to the block formula
    plain = bz.anyon_2n_point(spec)
    vspec, norm = bz.rescaled_vertex_spec(spec, 1e-3)
    assert abs(norm * bz.vertex_n_point(vspec) / plain - 1.0) < 2e-2
    with pytest.raises(PreconditionError):
        bz.rescaled_vertex_spec(spec, 0.0)


def test_charge_commutator_converges_and_algebra_exact():
    prof = lambda th: np.exp(-0.5 * ((th - 0.5) / 0.25) ** 2)
    devs = []
    for P in (4, 8, 16, 32):
        chk = bz.charge_commutator_check(1.0, 0.9, prof, 1e-6, P)
        devs.append(chk.deviation)
        # per-mode the commutator ratio identity is exact; only the
        # Fourier truncation of f separates measured from target
        assert chk.algebra_gap < 1e-12
    assert devs == sorted(devs, reverse=True)
    assert devs[-1] < 1e-5


def test_charge_commutator_root_nu_scaling():
    prof = lambda th: np.exp(-0.5 * ((th - 0.5) / 0.25) ** 2)
    c1 = bz.charge_commutator_check(1.0, 0.9, prof, 1e-6, 24)
    c4 = bz.charge_commutator_check(4.0, 0.9, prof, 1e-6, 24)
    assert c4.measured / c1.measured == pytest.approx(2.0, rel=1e-12)


def test_charge_commutator_validation():
    prof = lambda th: np.exp(-(th**2))
    with pytest.raises(PreconditionError):
        bz.charge_commutator_check(0.5, 0.0, prof, 0.1, 8)
    with pytest.raises(PreconditionError):
        bz.charge_commutator_check(1.0, 0.0, prof, -0.1, 8)
    with pytest.raises(PreconditionError):
        bz.charge_commutator_check(1.0, 0.0, prof, 0.1, 0)
    with pytest.raises(PreconditionError):
        bz.charge_commutator_check(1.0, 0.0, lambda th: 1.0, 0.1, 4)
