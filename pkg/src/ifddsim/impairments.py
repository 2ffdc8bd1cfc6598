"""Hardware impairment models: CFO, self-interference leakage, ADC quantization.

Leakage coefficients are power ratios, so amplitudes scale with sqrt(rho);
the worst-case total rho = sum(rho_i) assumes all paths add constructively.
Reflection delays are quantized to whole samples because the simulator runs
at one sample per 1/B.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, OrthogonalityError
from .ofdm import OfdmConfig, pulse_response

__all__ = [
    "LeakagePath",
    "ImpairmentConfig",
    "Stage",
    "apply_cfo",
    "loopback",
    "quantize",
    "sqnr_analytic",
    "sqnr_massive",
    "sir_analytic",
]


class Stage(Enum):
    """Transmission stage whose receive-side ADC is being analyzed."""

    UPLINK_PILOT_DATA = "uplink"
    DOWNLINK_DATA = "downlink"


@dataclass(frozen=True)
class LeakagePath:
    """One TX-to-RX crosstalk path: power ratio rho and reflection delay."""

    rho: float
    delay_s: float = 0.0

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError("leakage power ratio must be non-negative")
        if self.delay_s < 0:
            raise DomainError("reflection delay must be non-negative")


@dataclass(frozen=True)
class ImpairmentConfig:
    """Impairment parameters for one transceiver.

    tx_power_w / rx_power_w define the reference (single-antenna) power gap
    between the transmitted self-interference and the desired received
    signal.  eps1 / eps2 are the massive-MIMO power-scaling exponents: BS
    per-antenna power ~ 1/M^eps1, UE power ~ 1/M^eps2.
    """

    cfo_hz: float = 0.0
    leakage: tuple[LeakagePath, ...] = field(default_factory=tuple)
    adc_bits: int = 8
    tx_power_w: float = 1.0
    rx_power_w: float = 1.0
    eps1: float = 1.5
    eps2: float = 0.5

    def __post_init__(self):
        if self.adc_bits < 1:
            raise DomainError("adc_bits must be a positive integer")
        if self.tx_power_w < 0:
            raise DomainError("tx_power_w must be non-negative")

    @property
    def total_leakage(self) -> float:
        """Worst-case constructive sum rho = sum(rho_i)."""
        return sum(p.rho for p in self.leakage)

    @property
    def power_gap(self) -> float:
        """Linear reference ratio P_tx / P_rx."""
        if self.rx_power_w <= 0:
            raise DomainError("rx_power_w must be positive")
        return self.tx_power_w / self.rx_power_w


def apply_cfo(samples: np.ndarray, f_off_hz: float, t0_s: float, cfg: OfdmConfig) -> np.ndarray:
    """Rotate sample n by exp(j 2 pi f_off (t0 + n/B)); magnitudes unchanged."""
    samples = np.asarray(samples, dtype=np.complex128)
    if f_off_hz == 0.0:
        return samples.copy()
    t = t0_s + np.arange(samples.size) * cfg.sample_period_s
    return samples * np.exp(2j * np.pi * f_off_hz * t)


def leakage_delays_samples(imp: ImpairmentConfig, cfg: OfdmConfig) -> list[int]:
    """Round every reflection delay to samples, enforcing the CP bound."""
    delays = []
    for path in imp.leakage:
        d = round(path.delay_s * cfg.bandwidth_hz)
        if d > cfg.cp_samples:
            raise OrthogonalityError(
                f"reflection delay {path.delay_s:.3e}s = {d} samples exceeds "
                f"the cyclic prefix ({cfg.cp_samples} samples)"
            )
        delays.append(d)
    return delays


def loopback(ul_tx: np.ndarray, imp: ImpairmentConfig, cfg: OfdmConfig) -> np.ndarray:
    """Self-interference block: sum_i sqrt(rho_i) * ul_tx delayed by tau_i.

    The caller adds the result to the received downlink block before
    demodulation.  Delays are applied within the block (the head is
    zero-filled); with delays at most one CP the DFT window never sees the
    fill, which is exactly the orthogonality condition.
    """
    ul_tx = np.asarray(ul_tx, dtype=np.complex128)
    out = np.zeros_like(ul_tx)
    for path, d in zip(imp.leakage, leakage_delays_samples(imp, cfg)):
        if path.rho == 0.0:
            continue
        amp = math.sqrt(path.rho)
        if d == 0:
            out += amp * ul_tx
        else:
            out[d:] += amp * ul_tx[:-d]
    return out


def quantize(samples: np.ndarray, adc_bits: int, full_scale: float) -> np.ndarray:
    """Uniform mid-rise quantizer applied to I and Q independently.

    2**adc_bits levels span [-full_scale, +full_scale); out-of-range values
    saturate to the extreme levels.  In-range error is at most half an LSB
    (full_scale / 2**adc_bits) per component.
    """
    if full_scale <= 0:
        raise DomainError("full_scale must be positive")
    if adc_bits < 1:
        raise DomainError("adc_bits must be a positive integer")
    samples = np.asarray(samples, dtype=np.complex128)
    n_levels = 2 ** adc_bits
    step = 2.0 * full_scale / n_levels

    def _q(x):
        idx = np.floor((x + full_scale) / step)
        idx = np.clip(idx, 0, n_levels - 1)
        return -full_scale + (idx + 0.5) * step

    return _q(samples.real) + 1j * _q(samples.imag)


def sqnr_analytic(imp: ImpairmentConfig) -> float:
    """Leakage-limited SQNR: 1.5 N^2 / (1 + rho * P_tx/P_rx), N = 2**bits."""
    n_levels = 2 ** imp.adc_bits
    return 1.5 * n_levels ** 2 / (1.0 + imp.total_leakage * imp.power_gap)


def sqnr_massive(imp: ImpairmentConfig, n_antennas: int, stage: Stage) -> float:
    """SQNR with massive-MIMO power scaling at the given stage.

    Uplink pilots/data (BS receive): the BS's own downlink leakage over the
    uplink signal shrinks as M^(eps1 - eps2).  Downlink data (UE receive):
    array gain plus reduced UE power shrink the gap as M^(2 - eps1 + eps2).
    M = 1 reduces both to the plain formula.
    """
    if n_antennas < 1:
        raise DomainError("n_antennas must be >= 1")
    if stage == Stage.UPLINK_PILOT_DATA:
        exponent = imp.eps1 - imp.eps2
    elif stage == Stage.DOWNLINK_DATA:
        exponent = 2.0 - imp.eps1 + imp.eps2
    else:
        raise DomainError(f"unknown stage {stage!r}")
    n_levels = 2 ** imp.adc_bits
    gap = imp.total_leakage / n_antennas ** exponent * imp.power_gap
    return 1.5 * n_levels ** 2 / (1.0 + gap)


def sir_analytic(f_off_hz: float, subcarrier: int, cfg: OfdmConfig, interferers=None) -> float:
    """Average signal-to-interference ratio under a carrier frequency offset.

    Evaluates |G(f_off)|^2 / sum_{n != l} |G((n - l) f_sub + f_off)|^2 with
    unit symbol power and unit channel gain.  By default the sum runs over
    all other subcarriers; pass `interferers` to restrict it to an allocated
    subset.  f_off = 0 returns inf, since all interference terms sit exactly
    on orthogonality nulls.
    """
    if not 0 <= subcarrier < cfg.n_sub:
        raise DomainError(f"subcarrier {subcarrier} outside [0, {cfg.n_sub})")
    if f_off_hz == 0.0:
        return math.inf
    if interferers is None:
        others = np.arange(cfg.n_sub)
        others = others[others != subcarrier]
    else:
        others = np.asarray(list(interferers), dtype=np.int64)
        others = others[others != subcarrier]
        if others.size == 0:
            return math.inf
    f_sub = cfg.subcarrier_spacing_hz
    gains = pulse_response((others - subcarrier) * f_sub + f_off_hz, cfg)
    interference = float(np.sum(np.abs(gains) ** 2))
    desired = abs(pulse_response(f_off_hz, cfg)) ** 2
    if interference == 0.0:
        return math.inf
    return desired / interference
