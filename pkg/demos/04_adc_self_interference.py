"""The full-duplex ADC problem and how antennas dig the link out of it.

Transmitting and receiving on the same antenna leaks a copy of the uplink
into the receive chain tens of dB above the wanted downlink.  The automatic
gain control then scales the ADC to the leakage, burying the signal in
quantization noise.  More base-station antennas shrink the power gap from
both sides: array gain raises the received power while the per-antenna
transmit power falls.

Run:  python demos/04_adc_self_interference.py
"""

import numpy as np

from ifddsim import ImpairmentConfig, LeakagePath, Stage, quantize, sqnr_analytic, sqnr_massive

# --- the quantizer itself ---------------------------------------------------
rng = np.random.default_rng(0)
print("quantizer sanity (full-range triangular amplitude):")
for bits in (6, 8, 10):
    n = 200_000
    x = (np.sqrt(rng.random(n)) * np.sign(rng.random(n) - 0.5)
         + 1j * np.sqrt(rng.random(n)) * np.sign(rng.random(n) - 0.5))
    q = quantize(x, bits, 1.0)
    measured = 10 * np.log10(np.mean(np.abs(x) ** 2) / np.mean(np.abs(x - q) ** 2))
    print("  %2d bits: measured %.1f dB, law 10log10(1.5*2^%d) = %.1f dB"
          % (bits, measured, 2 * bits, 10 * np.log10(1.5 * 4 ** bits)))

# --- the single-antenna disaster --------------------------------------------
imp = ImpairmentConfig(leakage=(LeakagePath(rho=10 ** (-10 / 10)),),
                       adc_bits=8, tx_power_w=1e10, rx_power_w=1.0)
print("\n8-bit ADC, -10 dB isolation, 100 dB transmit/receive gap:")
print("  achievable SQNR = %.1f dB  (useless for a single antenna)"
      % (10 * np.log10(sqnr_analytic(imp))))

# --- massive MIMO to the rescue ---------------------------------------------
# Power scaling: BS per-antenna power ~ 1/M^(3/2), UE power ~ 1/M^(1/2), so
# the effective gap falls by 1/M at both transmission stages.
print("\nSQNR vs number of BS antennas (70 dB reference gap):")
imp70 = ImpairmentConfig(leakage=(LeakagePath(rho=0.1),), adc_bits=8,
                         tx_power_w=1e7, rx_power_w=1.0, eps1=1.5, eps2=0.5)
imp70_quiet = ImpairmentConfig(leakage=(LeakagePath(rho=1e-3),), adc_bits=8,
                               tx_power_w=1e7, rx_power_w=1.0)
print("   M      rho=-10 dB    rho=-30 dB")
for m in (1, 4, 16, 64, 256, 1024):
    rich = 10 * np.log10(sqnr_massive(imp70, m, Stage.UPLINK_PILOT_DATA))
    quiet = 10 * np.log10(sqnr_massive(imp70_quiet, m, Stage.UPLINK_PILOT_DATA))
    marker = "  <- working point reachable" if rich >= 3.0 else ""
    print(" %5d     %7.1f dB   %7.1f dB%s" % (m, rich, quiet, marker))
