"""Fading channels and the frequency-reciprocity correlation.

Interlaced duplexing lives or dies by how similar adjacent subcarriers are.
This script samples tapped-delay-line Rayleigh channels, checks the Jakes
time autocorrelation, and reproduces the correlation-vs-subcarrier-count
trend for several channel orders.

Run:  python demos/02_channel_reciprocity.py
"""

import numpy as np
from scipy.special import j0

from ifddsim import (
    ChannelModelConfig,
    OfdmConfig,
    correlation,
    ctf,
    delta_h_ensemble,
    evolve,
    frequency_correlation,
    sample_tdl,
)

cfg = OfdmConfig(20e6, 1024, 128)

# --- time direction: Jakes autocorrelation ---------------------------------
model = ChannelModelConfig(n_taps=1, n_antennas=4000, doppler_hz=100.0)
ch = sample_tdl(model, seed=1)
print("tap variance (target 1.0):", np.mean(np.abs(ch.taps) ** 2).round(4))
print("\n f_D*dt   measured   J0(2 pi f_D dt)")
for fd_dt in (0.05, 0.1, 0.25, 0.5):
    later = evolve(ch, fd_dt / model.doppler_hz, model)
    corr = np.mean(ch.taps * np.conj(later.taps)).real
    print("  %4.2f    %7.4f    %7.4f" % (fd_dt, corr, j0(2 * np.pi * fd_dt)))

# --- frequency direction: adjacent-subcarrier correlation ------------------
# One uplink subcarrier must stand in for its two downlink neighbours, so
# delta_h between adjacent subcarriers is the precoding-match currency.
model = ChannelModelConfig(n_taps=11, n_antennas=64)
ch = sample_tdl(model, seed=2)
h_u = ctf(ch, 500, cfg)
print("\ndelta_h(500, 501) one draw, M=64:", round(correlation(h_u, ctf(ch, 501, cfg)), 4))
print("delta_h(500, 520) one draw, M=64:", round(correlation(h_u, ctf(ch, 520, cfg)), 4))

# More taps -> more frequency selectivity -> more subcarriers needed at a
# fixed bandwidth to keep neighbours correlated.
print("\n        " + "".join("N=%-6d" % n for n in (64, 256, 1024)))
for order in (2, 10, 50):
    model = ChannelModelConfig(n_taps=order + 1, n_antennas=8)
    row = []
    for n_sub in (64, 256, 1024):
        measured = delta_h_ensemble(model, n_sub, n_realizations=300, seed=5)
        row.append(measured)
    analytic = [frequency_correlation(order + 1, n, 1) for n in (64, 256, 1024)]
    print("L=%-3d   " % order + "".join("%.3f  " % v for v in row)
          + "  (closed form: " + ", ".join("%.3f" % a for a in analytic) + ")")
