"""A first tour of the OFDM layer: numerology, round trips, pulse shaping.

Run:  python demos/01_ofdm_basics.py
"""

import numpy as np

from ifddsim import OfdmConfig, demodulate, modulate, pulse_response

# The LTE-like numerology used throughout: 20 MHz sampled band split into
# 1024 subcarriers with a 128-sample cyclic prefix.
cfg = OfdmConfig(bandwidth_hz=20e6, n_sub=1024, cp_samples=128)
print("subcarrier spacing :", cfg.subcarrier_spacing_hz / 1e3, "kHz")
print("useful symbol      :", cfg.useful_symbol_s * 1e6, "us")
print("total symbol (w/CP): %.1f us" % (cfg.total_symbol_s * 1e6,))

# Modulate a random QPSK-ish grid and demodulate it again: the unitary DFT
# convention returns the grid exactly and conserves energy.
rng = np.random.default_rng(0)
grid = (rng.standard_normal(cfg.n_sub) + 1j * rng.standard_normal(cfg.n_sub))
block = modulate(grid, cfg)
back = demodulate(block, cfg)
print("\nround-trip max error:", np.max(np.abs(back - grid)))
core = block[cfg.cp_samples:]
print("energy time/freq    :", np.sum(np.abs(core) ** 2) / np.sum(np.abs(grid) ** 2))

# A delay inside the CP only rotates the subcarriers...
d = 9
shifted = demodulate(np.roll(block, d), cfg)
print("\nshift by %d samples: magnitude error %.2e (phases rotate)" % (
    d, np.max(np.abs(np.abs(shifted) - np.abs(grid)))))
# ...but one sample beyond it breaks orthogonality.
broken = demodulate(np.roll(block, cfg.cp_samples + 1), cfg)
print("shift past the CP : grid error %.3f" % np.max(np.abs(broken - grid)))

# The receiver's rectangular window gives each subcarrier a Dirichlet-kernel
# frequency response: unity at its own bin, exact nulls on every other bin,
# and the classic 2/pi shoulder halfway in between.
f_sub = cfg.subcarrier_spacing_hz
for f, label in ((0.0, "own bin"), (f_sub, "next bin"), (0.5 * f_sub, "half bin")):
    print("pulse response at %-8s: |G| = %.6f" % (label, abs(pulse_response(f, cfg))))
