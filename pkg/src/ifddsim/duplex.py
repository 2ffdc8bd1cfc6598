"""TDD and subcarrier-interlaced FDD duplexing engines.

Protocol layout
---------------
TDD frames hold a downlink burst of 2/p symbols, a TX/RX turnaround gap, an
uplink burst of 1/p symbols whose middle symbol is the full-band pilot, and a
second gap.  Downlink precoding always uses the newest pilot estimate, which
is one frame old by construction; the first frame is a warm-up with no
estimate and is excluded from statistics downstream.

IFDD transmits uplink (on the U subcarriers) and downlink (on D) in every
symbol.  The UE keeps pilots on U, so the base station refreshes its
estimate each symbol and precodes the next symbol's downlink with it: CSI
staleness is exactly one IFDD symbol for every downlink symbol.  The pilot
rate only enters the frame-duration accounting (2T/p + 2T, a window of
1/p + 1 symbols), mirroring how the TDD frame charges for its pilot; it does
not gate the estimation cadence.

The UE receive path optionally applies the full-duplex impairments: the
self-interference loopback of its own uplink transmission, the downlink CFO
rotation, and an AGC-driven ADC.  The carrier offset multiplies only the
downlink term, since the leakage is up- and down-converted with the same
local oscillator.

SNR conventions: `snr_db` is the downlink working point, i.e. the
per-subcarrier post-precoding SNR a perfectly tracked channel would deliver
(UE noise is sized as M*P/snr, absorbing the array gain into the link
budget so the working point is M-independent).  `ul_pilot_snr_db` is the
per-antenna pilot SNR at the base station and controls estimation noise.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import channel as ch_mod
from . import impairments as imp_mod
from .channel import ChannelModelConfig, DuplexMode
from .errors import ConfigurationError, DomainError
from .impairments import ImpairmentConfig
from .ofdm import OfdmConfig, demodulate, modulate

__all__ = [
    "SubcarrierAllocation",
    "make_allocation",
    "ChannelEstimate",
    "estimate_channel",
    "ls_estimate",
    "mr_precode",
    "mr_weights",
    "FrameConfig",
    "frame_duration",
    "FrameResult",
    "TddLink",
    "IfddLink",
    "qpsk_modulate",
    "qpsk_demodulate",
]

_SQRT_HALF = 1.0 / np.sqrt(2.0)


def qpsk_modulate(bits: np.ndarray) -> np.ndarray:
    """Gray-mapped QPSK: bit pairs (I, Q), 0 -> +1/sqrt(2), 1 -> -1/sqrt(2)."""
    bits = np.asarray(bits)
    if bits.size % 2:
        raise DomainError("QPSK needs an even number of bits")
    pairs = bits.reshape(-1, 2)
    return _SQRT_HALF * ((1.0 - 2.0 * pairs[:, 0]) + 1j * (1.0 - 2.0 * pairs[:, 1]))


def qpsk_demodulate(symbols: np.ndarray) -> np.ndarray:
    """Hard quadrant decisions back to interleaved bits."""
    symbols = np.asarray(symbols)
    bits = np.empty((symbols.size, 2), dtype=np.uint8)
    bits[:, 0] = symbols.real < 0
    bits[:, 1] = symbols.imag < 0
    return bits.reshape(-1)


# ---------------------------------------------------------------------------
# Subcarrier allocation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubcarrierAllocation:
    """Disjoint uplink/downlink subcarrier sets in the repeating D,U,D pattern.

    `dl_source[j]` is the uplink subcarrier whose estimate precodes
    downlink[j]; `dl_source_pos[j]` is its position within `uplink`.
    Subcarriers in `nulled` (band-edge remainder when n_sub is not divisible
    by 3) carry nothing.
    """

    n_sub: int
    uplink: np.ndarray
    downlink: np.ndarray
    nulled: np.ndarray
    dl_source: np.ndarray
    dl_source_pos: np.ndarray

    def adjacency(self, u: int) -> tuple[int, int]:
        """Downlink dependents {u-1, u+1} of an uplink subcarrier."""
        if u not in self.uplink:
            raise DomainError(f"{u} is not an uplink subcarrier")
        return (u - 1, u + 1)


def make_allocation(n_sub: int) -> SubcarrierAllocation:
    """Interlace n_sub subcarriers as [D, U, D] repeating.

    Indices congruent to 1 mod 3 are uplink; their neighbours are the two
    downlink subcarriers they serve.  A remainder of 1 or 2 subcarriers at
    the top edge is nulled, keeping |D| = 2 |U| exact.
    """
    if n_sub < 3:
        raise ConfigurationError("allocation needs at least 3 subcarriers")
    n_groups = n_sub // 3
    uplink = 3 * np.arange(n_groups) + 1
    downlink = np.sort(np.concatenate([uplink - 1, uplink + 1]))
    nulled = np.arange(3 * n_groups, n_sub)
    dl_source = np.where(downlink % 3 == 0, downlink + 1, downlink - 1)
    dl_source_pos = (dl_source - 1) // 3
    return SubcarrierAllocation(
        n_sub=n_sub,
        uplink=uplink,
        downlink=downlink,
        nulled=nulled,
        dl_source=dl_source,
        dl_source_pos=dl_source_pos,
    )


# ---------------------------------------------------------------------------
# Channel estimation and precoding
# ---------------------------------------------------------------------------

@dataclass
class ChannelEstimate:
    """Per-subcarrier least-squares channel estimates.

    values[k, i] is antenna k's estimate at subcarriers[i].  symbol_index
    counts OFDM symbols on the estimating link; staleness at use time is
    `used_symbol - symbol_index`.
    """

    values: np.ndarray
    subcarriers: np.ndarray
    symbol_index: int = 0
    time_s: float = 0.0

    def staleness(self, now_symbol: int) -> int:
        return now_symbol - self.symbol_index


def ls_estimate(rx_rows: np.ndarray, pilots: np.ndarray) -> np.ndarray:
    """Divide each antenna's received symbols by the known pilots."""
    pilots = np.asarray(pilots, dtype=np.complex128)
    if np.any(np.abs(pilots) == 0):
        raise DomainError("pilot symbols must be nonzero")
    return np.asarray(rx_rows, dtype=np.complex128) / pilots


def estimate_channel(
    rx_grid: np.ndarray,
    pilots: np.ndarray,
    alloc: SubcarrierAllocation,
    symbol_index: int = 0,
    time_s: float = 0.0,
) -> ChannelEstimate:
    """LS estimate at the uplink subcarriers from one received symbol.

    rx_grid has one demodulated row per antenna (shape [M, n_sub] or already
    restricted to [M, |U|]); pilots are the known symbols at alloc.uplink.
    """
    rx_grid = np.asarray(rx_grid, dtype=np.complex128)
    if rx_grid.ndim != 2:
        raise ConfigurationError("rx_grid must be 2-D [antennas, subcarriers]")
    if rx_grid.shape[1] == alloc.n_sub:
        rx = rx_grid[:, alloc.uplink]
    elif rx_grid.shape[1] == alloc.uplink.size:
        rx = rx_grid
    else:
        raise ConfigurationError(
            f"rx_grid width {rx_grid.shape[1]} matches neither n_sub nor |U|"
        )
    pilots = np.asarray(pilots, dtype=np.complex128)
    if pilots.shape != (alloc.uplink.size,):
        raise ConfigurationError("need one pilot per uplink subcarrier")
    return ChannelEstimate(
        values=ls_estimate(rx, pilots),
        subcarriers=alloc.uplink.copy(),
        symbol_index=symbol_index,
        time_s=time_s,
    )


def mr_weights(vectors: np.ndarray, power: float) -> tuple[np.ndarray, np.ndarray]:
    """Maximum-ratio weights beta * conj(h) with beta = sqrt(P) / ||h||.

    vectors is [M, n_sc]; returns (weights [M, n_sc], skipped mask) where
    skipped marks zero-norm columns (weights left at zero).
    """
    norms = np.linalg.norm(vectors, axis=0)
    skipped = norms == 0
    safe = np.where(skipped, 1.0, norms)
    weights = np.conj(vectors) * (math.sqrt(power) / safe)
    weights[:, skipped] = 0.0
    return weights, skipped


def mr_precode(
    est: ChannelEstimate,
    dl_symbols: np.ndarray,
    alloc: SubcarrierAllocation,
    power: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Precode downlink data with the adjacent uplink estimates.

    dl_symbols holds one value per alloc.downlink entry.  Antenna k sends
    beta * conj(est_k(u_i)) * X(d_j) on d_j, with the per-subcarrier transmit
    power across antennas equal to `power` exactly.  Returns the [M, n_sub]
    antenna grid and the mask of downlink subcarriers skipped because their
    estimate had zero norm.
    """
    dl_symbols = np.asarray(dl_symbols, dtype=np.complex128)
    if dl_symbols.shape != (alloc.downlink.size,):
        raise ConfigurationError("need one symbol per downlink subcarrier")
    if est.subcarriers.size != alloc.uplink.size or np.any(est.subcarriers != alloc.uplink):
        raise ConfigurationError("estimate does not cover the uplink set")
    weights, skipped_cols = mr_weights(est.values[:, alloc.dl_source_pos], power)
    grid = np.zeros((est.values.shape[0], alloc.n_sub), dtype=np.complex128)
    grid[:, alloc.downlink] = weights * dl_symbols
    return grid, skipped_cols


# ---------------------------------------------------------------------------
# Frame timing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameConfig:
    """Pilot rate, turnaround gap and duplexing mode.

    pilot_rate p must have an integer reciprocal: the TDD frame carries 1/p
    uplink symbols (one of them the pilot) and 2/p downlink symbols; IFDD
    accounts a window of 1/p + 1 double-length symbols.
    """

    pilot_rate: float
    transient_s: float = 1e-6
    mode: DuplexMode = DuplexMode.TDD

    def __post_init__(self):
        if not 0 < self.pilot_rate <= 1:
            raise ConfigurationError("pilot_rate must be in (0, 1]")
        inv = 1.0 / self.pilot_rate
        if abs(inv - round(inv)) > 1e-9:
            raise ConfigurationError(
                f"1/pilot_rate must be an integer, got 1/{self.pilot_rate}"
            )
        if self.transient_s < 0:
            raise ConfigurationError("transient_s must be non-negative")

    @property
    def uplink_symbols(self) -> int:
        return round(1.0 / self.pilot_rate)

    @property
    def downlink_symbols(self) -> int:
        return 2 * self.uplink_symbols

    @property
    def pilot_position(self) -> int:
        """Pilot index inside the uplink burst ('in the middle')."""
        return (self.uplink_symbols - 1) // 2


def frame_duration(fc: FrameConfig, symbol_s: float) -> float:
    """Frame span in seconds for base (TDD) symbol duration T = symbol_s.

    TDD: 2T/p + T/p + 2*transient.  IFDD: 2T/p + 2T, where the IFDD symbol
    lasts 2T because it doubles n_sub at equal bandwidth; callers holding the
    IFDD numerology pass symbol_s = total_symbol_s / 2.
    """
    p = fc.pilot_rate
    if fc.mode == DuplexMode.TDD:
        return 2.0 * symbol_s / p + symbol_s / p + 2.0 * fc.transient_s
    return 2.0 * symbol_s / p + 2.0 * symbol_s


# ---------------------------------------------------------------------------
# Frame results
# ---------------------------------------------------------------------------

@dataclass
class FrameResult:
    """Transcript of one simulated frame.

    Bit arrays are [n_dl_symbols, 2 * n_dl_subcarriers] with interleaved
    QPSK bit pairs.  staleness_s[i] is the age of the estimate used by
    downlink symbol i (NaN during warm-up); csi_match[i] is the measured
    delta_h between that estimate and the true channel at transmit time.
    sinr is the per-subcarrier ratio of desired to (noise + distortion)
    power accumulated over the frame's downlink symbols.
    """

    mode: DuplexMode
    frame_index: int
    warmup: bool
    frame_duration_s: float
    dl_subcarriers: np.ndarray
    tx_bits: np.ndarray
    decided_bits: np.ndarray
    staleness_s: np.ndarray
    staleness_symbols: np.ndarray
    csi_match: np.ndarray
    sinr: np.ndarray
    coherence_ok: bool
    skipped_subcarriers: int = 0
    estimates: list = field(default_factory=list)

    @property
    def n_bits(self) -> int:
        return int(self.tx_bits.size)

    @property
    def ber(self) -> float:
        return float(np.mean(self.tx_bits != self.decided_bits))


# ---------------------------------------------------------------------------
# Link engines
# ---------------------------------------------------------------------------

def _fixed_pilots(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit-magnitude QPSK pilot symbols, fixed per subcarrier."""
    return qpsk_modulate(rng.integers(0, 2, size=2 * n, dtype=np.uint8))


def _complex_noise(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _csi_match(est_cols: np.ndarray, true_cols: np.ndarray) -> float:
    """Mean per-subcarrier delta_h between estimate and true CTF columns."""
    num = np.abs(np.sum(np.conj(est_cols) * true_cols, axis=0))
    den = np.linalg.norm(est_cols, axis=0) * np.linalg.norm(true_cols, axis=0)
    ok = den > 0
    if not np.any(ok):
        return float("nan")
    return float(np.mean(num[ok] / den[ok]))


class _LinkBase:
    """State shared by both engines: channel, clock, RNG streams."""

    def __init__(self, cfg: OfdmConfig, model: ChannelModelConfig,
                 frame_cfg: FrameConfig, snr_db, ul_pilot_snr_db, dl_power,
                 seed, store_estimates):
        if model.n_taps - 1 > cfg.cp_samples:
            raise ConfigurationError(
                f"channel order {model.n_taps - 1} exceeds the cyclic prefix "
                f"({cfg.cp_samples} samples); the flat per-subcarrier model "
                f"requires all taps inside the CP"
            )
        self.cfg = cfg
        self.model = model
        self.frame_cfg = frame_cfg
        self.dl_power = float(dl_power)
        self.snr = None if snr_db is None else 10.0 ** (snr_db / 10.0)
        self.pilot_snr = 10.0 ** (ul_pilot_snr_db / 10.0)
        self.store_estimates = store_estimates
        seq = np.random.SeedSequence(seed)
        ch_seed, bits_seed, noise_seed, pilot_seed = seq.spawn(4)
        self.channel = ch_mod.sample_tdl(model, ch_seed)
        self.bits_rng = np.random.default_rng(bits_seed)
        self.noise_rng = np.random.default_rng(noise_seed)
        self.pilot_rng = np.random.default_rng(pilot_seed)
        self.clock_samples = 0  # integer sample clock avoids float drift
        self.frame_index = 0
        self.estimate: ChannelEstimate | None = None
        self.est_clock_samples: int | None = None
        self.symbol_counter = 0

    @property
    def time_s(self) -> float:
        return self.clock_samples / self.cfg.bandwidth_hz

    def _advance(self, samples: int) -> None:
        self.clock_samples += samples
        self.channel = ch_mod.evolve(
            self.channel, samples / self.cfg.bandwidth_hz, self.model
        )

    def _staleness_samples(self) -> int | None:
        if self.est_clock_samples is None:
            return None
        return self.clock_samples - self.est_clock_samples

    def _ue_noise_variance(self) -> float:
        # Post-FFT noise sized so ideal-CSI post-precoding SNR == snr.
        if self.snr is None:
            return 0.0
        return self.model.n_antennas * self.dl_power / self.snr


class TddLink(_LinkBase):
    """Canonical TDD massive-MIMO link over the full band."""

    def __init__(self, cfg: OfdmConfig, model: ChannelModelConfig,
                 frame_cfg: FrameConfig, snr_db: float | None = 3.0,
                 ul_pilot_snr_db: float = 20.0, dl_power: float = 1.0,
                 seed: int = 0, store_estimates: bool = False):
        if frame_cfg.mode != DuplexMode.TDD:
            raise ConfigurationError("frame_cfg.mode must be TDD")
        super().__init__(cfg, model, frame_cfg, snr_db, ul_pilot_snr_db,
                         dl_power, seed, store_estimates)
        self.pilots = _fixed_pilots(self.pilot_rng, cfg.n_sub)
        self.coherence = ch_mod.coherence_check(cfg, model, DuplexMode.TDD)
        self.transient_samples = round(frame_cfg.transient_s * cfg.bandwidth_hz)
        self.dl_subcarriers = np.arange(cfg.n_sub)

    def run_frame(self) -> FrameResult:
        cfg = self.cfg
        fc = self.frame_cfg
        n_dl = fc.downlink_symbols
        n_ul = fc.uplink_symbols
        n_sc = cfg.n_sub
        m = self.model.n_antennas
        noise_var = self._ue_noise_variance()

        tx_bits = np.empty((n_dl, 2 * n_sc), dtype=np.uint8)
        decided = np.empty_like(tx_bits)
        staleness_s = np.full(n_dl, np.nan)
        staleness_sym = np.full(n_dl, -1, dtype=np.int64)
        csi_match = np.full(n_dl, np.nan)
        desired_pow = np.zeros(n_sc)
        error_pow = np.zeros(n_sc)
        warmup = self.estimate is None
        estimates = []

        for i in range(n_dl):
            h = ch_mod.ctf_grid(self.channel, cfg)
            bits = self.bits_rng.integers(0, 2, size=2 * n_sc, dtype=np.uint8)
            x = qpsk_modulate(bits)
            if self.estimate is None:
                weights = np.full((m, n_sc), math.sqrt(self.dl_power / m),
                                  dtype=np.complex128)
            else:
                weights, _ = mr_weights(self.estimate.values, self.dl_power)
                stale = self._staleness_samples()
                staleness_s[i] = stale / cfg.bandwidth_hz
                staleness_sym[i] = self.symbol_counter - self.estimate.symbol_index
                csi_match[i] = _csi_match(self.estimate.values, h)
                if self.store_estimates:
                    estimates.append(self.estimate)
            gain = np.sum(h * weights, axis=0)
            y = gain * x
            if noise_var > 0:
                y = y + _complex_noise(self.noise_rng, n_sc, noise_var)
            decided[i] = qpsk_demodulate(y)
            tx_bits[i] = bits
            desired_pow += np.abs(gain) ** 2
            error_pow += np.abs(y - gain * x) ** 2
            self._advance(cfg.block_samples)
            self.symbol_counter += 1

        self._advance(self.transient_samples)

        for j in range(n_ul):
            if j == fc.pilot_position:
                h = ch_mod.ctf_grid(self.channel, cfg)
                rx = h * self.pilots + _complex_noise(
                    self.noise_rng, (m, n_sc), 1.0 / self.pilot_snr
                )
                self.estimate = ChannelEstimate(
                    values=ls_estimate(rx, self.pilots),
                    subcarriers=np.arange(n_sc),
                    symbol_index=self.symbol_counter,
                    time_s=self.time_s,
                )
                self.est_clock_samples = self.clock_samples
            self._advance(cfg.block_samples)
            self.symbol_counter += 1

        self._advance(self.transient_samples)

        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = np.where(error_pow > 0, desired_pow / error_pow, np.inf)
        result = FrameResult(
            mode=DuplexMode.TDD,
            frame_index=self.frame_index,
            warmup=warmup,
            frame_duration_s=frame_duration(fc, cfg.total_symbol_s),
            dl_subcarriers=self.dl_subcarriers,
            tx_bits=tx_bits,
            decided_bits=decided,
            staleness_s=staleness_s,
            staleness_symbols=staleness_sym,
            csi_match=csi_match,
            sinr=sinr,
            coherence_ok=self.coherence.feasible,
            estimates=estimates,
        )
        self.frame_index += 1
        return result


class IfddLink(_LinkBase):
    """Subcarrier-interlaced FDD link with the UE-side impairment path."""

    def __init__(self, cfg: OfdmConfig, model: ChannelModelConfig,
                 frame_cfg: FrameConfig, impairments: ImpairmentConfig | None = None,
                 snr_db: float | None = 3.0, ul_pilot_snr_db: float = 20.0,
                 dl_power: float = 1.0, seed: int = 0,
                 agc_headroom: float = 3.0, store_estimates: bool = False,
                 timing_offset_samples: float | None = None):
        if frame_cfg.mode != DuplexMode.IFDD:
            raise ConfigurationError("frame_cfg.mode must be IFDD")
        super().__init__(cfg, model, frame_cfg, snr_db, ul_pilot_snr_db,
                         dl_power, seed, store_estimates)
        self.alloc = make_allocation(cfg.n_sub)
        # Timing convention: both ends synchronize to the channel-energy
        # centroid, removing the deterministic phase advance
        # arg E[H(u) H*(u+1)] = pi * L / n_sub that a 0..L tap profile puts
        # between adjacent subcarriers.  Without it the quadrant demapper
        # pays a constant rotation on every downlink subcarrier (the
        # residual-phase term of the per-subcarrier receive model); the
        # offset is a parameter because no single convention is canonical.
        if timing_offset_samples is None:
            timing_offset_samples = (model.n_taps - 1) / 2.0
        self._timing_ramp = np.exp(
            2j * np.pi * np.arange(cfg.n_sub) * timing_offset_samples / cfg.n_sub)
        self.impairments = impairments
        self.agc_headroom = float(agc_headroom)
        if impairments is not None:
            # Fails fast when any reflection exceeds the CP (orthogonality).
            imp_mod.leakage_delays_samples(impairments, cfg)
        self.pilots = _fixed_pilots(self.pilot_rng, self.alloc.uplink.size)
        self.coherence = ch_mod.coherence_check(cfg, model, DuplexMode.IFDD)
        self.dl_subcarriers = self.alloc.downlink

        m = model.n_antennas
        n_d = self.alloc.downlink.size
        n_u = self.alloc.uplink.size
        # Expected received downlink power per time-domain sample; anchors
        # the UE transmit level through the stage power gap of the
        # massive-MIMO scaling (gap / M^(2 - eps1 + eps2)).
        self._p_dl_time = self.dl_power * m * n_d / cfg.n_sub
        if impairments is not None:
            gap = impairments.power_gap / m ** (2.0 - impairments.eps1 + impairments.eps2)
            p_ul_time = gap * self._p_dl_time
            self._ul_amp = math.sqrt(p_ul_time * cfg.n_sub / n_u)
            p_leak_time = impairments.total_leakage * p_ul_time
            per_component = (self._p_dl_time + p_leak_time + self._ue_noise_variance()) / 2.0
            self._full_scale = self.agc_headroom * math.sqrt(per_component)
        else:
            self._ul_amp = 0.0
            self._full_scale = None

    @property
    def symbols_per_frame(self) -> int:
        return self.frame_cfg.uplink_symbols + 1

    def run_frame(self) -> FrameResult:
        cfg = self.cfg
        alloc = self.alloc
        m = self.model.n_antennas
        n_d = alloc.downlink.size
        n_sym = self.symbols_per_frame
        noise_var = self._ue_noise_variance()
        imp = self.impairments

        tx_bits = np.empty((n_sym, 2 * n_d), dtype=np.uint8)
        decided = np.empty_like(tx_bits)
        staleness_s = np.full(n_sym, np.nan)
        staleness_sym = np.full(n_sym, -1, dtype=np.int64)
        csi_match = np.full(n_sym, np.nan)
        desired_pow = np.zeros(n_d)
        error_pow = np.zeros(n_d)
        warmup = self.estimate is None
        skipped = 0
        estimates = []

        ul_grid = np.zeros(cfg.n_sub, dtype=np.complex128)
        ul_grid[alloc.uplink] = self.pilots

        for s in range(n_sym):
            h = ch_mod.ctf_grid(self.channel, cfg) * self._timing_ramp

            bits = self.bits_rng.integers(0, 2, size=2 * n_d, dtype=np.uint8)
            x = qpsk_modulate(bits)
            if self.estimate is None:
                ant_grid = np.zeros((m, cfg.n_sub), dtype=np.complex128)
                ant_grid[:, alloc.downlink] = math.sqrt(self.dl_power / m) * x
            else:
                ant_grid, skipped_cols = mr_precode(self.estimate, x, alloc,
                                                    self.dl_power)
                skipped += int(np.count_nonzero(skipped_cols))
                staleness_s[s] = self._staleness_samples() / cfg.bandwidth_hz
                staleness_sym[s] = self.symbol_counter - self.estimate.symbol_index
                csi_match[s] = _csi_match(
                    self.estimate.values[:, alloc.dl_source_pos],
                    h[:, alloc.downlink],
                )
                if self.store_estimates:
                    estimates.append(self.estimate)

            received = np.sum(h * ant_grid, axis=0)  # desired grid at the UE
            gain_d = received[alloc.downlink] / x  # |x| = 1/sqrt(2), never 0

            if imp is None:
                y = received[alloc.downlink]
                if noise_var > 0:
                    y = y + _complex_noise(self.noise_rng, n_d, noise_var)
            else:
                y_t = modulate(received, cfg)
                if imp.cfo_hz != 0.0:
                    y_t = imp_mod.apply_cfo(y_t, imp.cfo_hz, self.time_s, cfg)
                ul_t = self._ul_amp * modulate(ul_grid, cfg)
                pre = y_t + imp_mod.loopback(ul_t, imp, cfg)
                if noise_var > 0:
                    pre = pre + _complex_noise(self.noise_rng, pre.shape, noise_var)
                rx = imp_mod.quantize(pre, imp.adc_bits, self._full_scale)
                y = demodulate(rx, cfg)[alloc.downlink]

            decided[s] = qpsk_demodulate(y)
            tx_bits[s] = bits
            desired_pow += np.abs(gain_d) ** 2
            error_pow += np.abs(y - gain_d * x) ** 2

            # Pilot received at the BS during this symbol refreshes the
            # estimate for the next one.
            rx_bs = h[:, alloc.uplink] * self.pilots + _complex_noise(
                self.noise_rng, (m, alloc.uplink.size), 1.0 / self.pilot_snr
            )
            self.estimate = ChannelEstimate(
                values=ls_estimate(rx_bs, self.pilots),
                subcarriers=alloc.uplink.copy(),
                symbol_index=self.symbol_counter,
                time_s=self.time_s,
            )
            self.est_clock_samples = self.clock_samples
            self._advance(cfg.block_samples)
            self.symbol_counter += 1

        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = np.where(error_pow > 0, desired_pow / error_pow, np.inf)
        result = FrameResult(
            mode=DuplexMode.IFDD,
            frame_index=self.frame_index,
            warmup=warmup,
            frame_duration_s=frame_duration(self.frame_cfg, cfg.total_symbol_s / 2.0),
            dl_subcarriers=self.dl_subcarriers,
            tx_bits=tx_bits,
            decided_bits=decided,
            staleness_s=staleness_s,
            staleness_symbols=staleness_sym,
            csi_match=csi_match,
            sinr=sinr,
            coherence_ok=self.coherence.feasible,
            skipped_subcarriers=skipped,
            estimates=estimates,
        )
        self.frame_index += 1
        return result
