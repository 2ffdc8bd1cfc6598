"""Carrier frequency offset and intercarrier interference.

A CFO between the two ends slides every subcarrier off its orthogonality
null; the analytic SIR follows from summing the Dirichlet kernel over all
interfering bins.  The same number falls out of a brute-force transmit /
rotate / receive simulation.

Run:  python demos/03_cfo_interference.py
"""

import numpy as np

from ifddsim import OfdmConfig, apply_cfo, demodulate, modulate, qpsk_modulate, sir_analytic

cfg = OfdmConfig(20e6, 1024, 128)
f_sub = cfg.subcarrier_spacing_hz
rng = np.random.default_rng(0)

print("normalized CFO   analytic SIR    simulated SIR")
for eps in (0.005, 0.01, 0.02, 0.05, 0.1):
    xs, ys = [], []
    for _ in range(400):
        grid = qpsk_modulate(rng.integers(0, 2, 2 * cfg.n_sub, dtype=np.uint8))
        block = apply_cfo(modulate(grid, cfg), eps * f_sub, 0.0, cfg)
        ys.append(demodulate(block, cfg)[2])
        xs.append(grid[2])
    xs, ys = np.array(xs), np.array(ys)
    g = np.vdot(xs, ys) / np.vdot(xs, xs)
    mc = abs(g) ** 2 / np.mean(np.abs(ys - g * xs) ** 2)
    an = sir_analytic(eps * f_sub, 2, cfg)
    print("   %5.3f         %6.2f dB       %6.2f dB"
          % (eps, 10 * np.log10(an), 10 * np.log10(mc)))

print("\nAt 1-5% offset the link still sees 20-35 dB of SIR, which is why")
print("interlaced operation survives realistic oscillator accuracy.")
print("Zero offset is exactly orthogonal:", sir_analytic(0.0, 2, cfg))
