"""Tour of the single-particle layer: two frequency scales, exact
eigenfunctions, filled-level density, and classical trajectories.

Run as: python3 demos/landau_levels.py
"""

import math

import numpy as np

from hall_edge import single_particle as spm


def main():
    # a strong field with a weak trap splits the spectrum into a fast
    # cyclotron-like ladder and a slow drift ladder
    cfg = spm.effective_field(10.0, 0.1)
    print(f"B = {cfg.magnetic_field}, E = {cfg.trap_strength}")
    print(f"effective field b  = {cfg.effective_field:.12f}")
    print(f"fast frequency     = {cfg.omega_fast:.12f}")
    print(f"slow frequency     = {cfg.omega_slow:.12f}")
    print(f"scale separation   = {cfg.omega_fast / cfg.omega_slow:.1f}x")
    print(f"ground energy      = {spm.ground_state_energy(cfg):.12f}")
    print()

    print("low-lying excitation energies (n fast, m slow):")
    for n in range(2):
        row = "  ".join(
            f"E({n},{m}) = {spm.spectrum(n, m, cfg):9.6f}" for m in range(4)
        )
        print("  " + row)
    print()

    # eigenfunctions are Laguerre polynomials under a Gaussian; together
    # the lowest ladder fills out a flat density b / 2 pi
    flat_cfg = spm.effective_field(2.0, 0.0)
    flat = flat_cfg.effective_field / (2.0 * math.pi)
    rs = np.array([0.0, 1.0, 2.0, 3.0, 5.0])
    for m_max in (5, 50, 200):
        dens = spm.lll_density(m_max, flat_cfg, rs, np.zeros_like(rs))
        gaps = np.abs(np.asarray(dens) - flat)
        print(
            f"filled levels up to m = {m_max:3d}: "
            f"max |density - b/2pi| on r <= 3 is {np.max(gaps[:4]):.3e}"
        )
    print(f"(saturation value b / 2 pi = {flat:.12f})")
    print()

    # classically the same two frequencies show up in the orbit
    dyn_cfg = spm.effective_field(3.0, 4.0)
    pt = spm.PhasePoint(1.0, 0.0, 0.0, 0.5)
    a, c = spm.mode_amplitudes(pt, dyn_cfg)
    print(f"orbit mode amplitudes: |a| = {abs(a):.6f}, |c| = {abs(c):.6f}")
    t_final = 8.0 * math.pi
    times, states = spm.sample_trajectory(pt, dyn_cfg, t_final, 2049)
    sig = states[:-1, 0] + 1j * states[:-1, 1]
    amps = np.fft.fft(sig) / (len(times) - 1)
    freqs = 2.0 * math.pi * np.fft.fftfreq(len(sig), d=times[1] - times[0])
    top = np.argsort(np.abs(amps))[::-1][:2]
    for i in sorted(top, key=lambda i: freqs[i]):
        print(f"  spectral peak at frequency {freqs[i]:+8.4f}, weight {abs(amps[i]):.6f}")
    print(f"(expected -omega_fast = {-dyn_cfg.omega_fast}, +omega_slow = {dyn_cfg.omega_slow})")

    # the rk4 integrator reproduces the analytic flow
    end_exact = spm.evolve(pt, dyn_cfg, 5.0)
    end_rk4 = spm.evolve(pt, dyn_cfg, 5.0, method="rk4")
    gap = max(
        abs(end_exact.x1 - end_rk4.x1),
        abs(end_exact.x2 - end_rk4.x2),
        abs(end_exact.p1 - end_rk4.p1),
        abs(end_exact.p2 - end_rk4.p2),
    )
    print(f"rk4 vs analytic after t = 5: max coordinate gap {gap:.3e}")


if __name__ == "__main__":
    main()
