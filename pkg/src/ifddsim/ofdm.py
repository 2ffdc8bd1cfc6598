"""OFDM numerology, cyclic-prefix modulation and the subcarrier pulse response.

Both DFT directions use the unitary (1/sqrt(N)) convention so that energy
bookkeeping is identical in the time and subcarrier domains.  Subcarrier
indices are 0-based everywhere.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

__all__ = ["OfdmConfig", "modulate", "demodulate", "pulse_response"]


@dataclass(frozen=True)
class OfdmConfig:
    """Multicarrier numerology for one link direction.

    Attributes:
        bandwidth_hz: sampling rate / occupied bandwidth B.
        n_sub: number of subcarriers (DFT size).
        cp_samples: cyclic prefix length in samples.
        carrier_hz: RF carrier frequency, used only for speed/Doppler
            conversions.
    """

    bandwidth_hz: float
    n_sub: int
    cp_samples: int
    carrier_hz: float = 2.1e9

    def __post_init__(self):
        if self.n_sub < 3:
            raise ConfigurationError(
                f"n_sub must be >= 3 (one uplink subcarrier flanked by two "
                f"downlink ones), got {self.n_sub}"
            )
        if not 0 <= self.cp_samples < self.n_sub:
            raise ConfigurationError(
                f"cp_samples must lie in [0, n_sub), got {self.cp_samples}"
            )
        if self.bandwidth_hz <= 0:
            raise ConfigurationError("bandwidth_hz must be positive")

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.bandwidth_hz / self.n_sub

    @property
    def sample_period_s(self) -> float:
        return 1.0 / self.bandwidth_hz

    @property
    def useful_symbol_s(self) -> float:
        return self.n_sub / self.bandwidth_hz

    @property
    def cp_duration_s(self) -> float:
        return self.cp_samples / self.bandwidth_hz

    @property
    def total_symbol_s(self) -> float:
        return (self.n_sub + self.cp_samples) / self.bandwidth_hz

    @property
    def block_samples(self) -> int:
        return self.n_sub + self.cp_samples


def modulate(grid: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Map one row of subcarrier values to a CP-prefixed time-domain block.

    The output is ``cfg.block_samples`` long: the last ``cp_samples`` of the
    core inverse DFT are prepended as the cyclic prefix.
    """
    grid = np.asarray(grid, dtype=np.complex128)
    if grid.shape != (cfg.n_sub,):
        raise ConfigurationError(
            f"grid length {grid.shape} does not match n_sub={cfg.n_sub}"
        )
    core = np.fft.ifft(grid) * np.sqrt(cfg.n_sub)
    if cfg.cp_samples == 0:
        return core
    return np.concatenate([core[-cfg.cp_samples:], core])


def demodulate(block: np.ndarray, cfg: OfdmConfig, window_start: int | None = None) -> np.ndarray:
    """Strip the CP and apply the unitary forward DFT.

    ``window_start`` selects where the N-sample DFT window begins inside the
    block; the default (cp_samples) assumes perfect timing.  It is exposed
    because the residual per-subcarrier phase depends on the receiver's
    timing-advance convention, which is not fixed here.
    """
    block = np.asarray(block, dtype=np.complex128)
    if block.shape != (cfg.block_samples,):
        raise ConfigurationError(
            f"block length {block.shape} does not match n_sub + cp_samples = "
            f"{cfg.block_samples}"
        )
    start = cfg.cp_samples if window_start is None else window_start
    if not 0 <= start <= cfg.cp_samples:
        raise ConfigurationError(
            f"window_start must lie in [0, cp_samples], got {start}"
        )
    core = block[start:start + cfg.n_sub]
    return np.fft.fft(core) / np.sqrt(cfg.n_sub)


def pulse_response(f_hz, cfg: OfdmConfig):
    """Complex gain of the rectangular OFDM observation window at offset f.

    G(f) = (1/N) * sum_{n=0}^{N-1} exp(j 2 pi f n / B), the Dirichlet kernel:
    G(0) = 1 and G(k * f_sub) = 0 for integer k not divisible by N.  This is
    the pulse shaping an unwindowed DFT receiver realizes, and the kernel the
    intercarrier-interference analysis sums over.

    Accepts a scalar or array of frequencies in Hz.
    """
    f = np.asarray(f_hz, dtype=np.float64)
    n = cfg.n_sub
    x = np.pi * f / cfg.bandwidth_hz  # half the per-sample phase step
    sin_x = np.sin(x)
    # Where x is a multiple of pi every phasor equals 1; take the L'Hopital
    # limit there instead of dividing by ~0.
    singular = np.abs(sin_x) < 1e-12
    safe_den = np.where(singular, 1.0, n * sin_x)
    mag = np.where(singular, np.cos(n * x) / np.cos(x), np.sin(n * x) / safe_den)
    out = mag * np.exp(1j * (n - 1) * x)
    if np.ndim(f_hz) == 0:
        return complex(out)
    return out
