"""Declarative experiment configuration with INI-file round-tripping.

One ExperimentConfig describes a complete experiment: numerology for both
duplexing modes, channel statistics, impairments, frame structure, sweep
grid and simulation controls.  Defaults follow the LTE-like simulation
parameter table (20 MHz, 1024/2048 subcarriers, CP 128/256, 2.1 GHz, channel
order 10, 128 BS antennas, QPSK at a 3 dB working point, 1 us turnaround).

Files use configparser INI syntax: human-editable sections of key = value
pairs.  Floats are serialized with repr() and fractions as "1/3", so a
config round-trips losslessly.
"""

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction

from .channel import ChannelModelConfig, DuplexMode, coherence_check
from .duplex import FrameConfig
from .errors import ConfigurationError
from .impairments import ImpairmentConfig, LeakagePath
from .ofdm import OfdmConfig

__all__ = ["ExperimentConfig", "load_config", "save_config", "validate_config"]


def _fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def _float_tuple(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _str_tuple(text: str) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(tok.strip() for tok in text.split(","))


def _fraction_tuple(text: str) -> tuple[Fraction, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(Fraction(tok.strip()) for tok in text.split(","))


@dataclass(frozen=True)
class ExperimentConfig:
    # [ofdm]
    bandwidth_hz: float = 20e6
    n_sub_tdd: int = 1024
    n_sub_ifdd: int = 2048
    cp_tdd: int = 128
    cp_ifdd: int = 256
    carrier_hz: float = 2.1e9
    # [channel]
    channel_order: int = 10
    n_antennas: int = 128
    coherence_bw_hz: float = 120e3
    coherence_time_s: float = 2e-3
    # [impairments]
    impairments_enabled: bool = False
    cfo_hz: float = 0.0
    leakage_db: tuple[float, ...] = ()
    leakage_delays_s: tuple[float, ...] = ()
    adc_bits: int = 8
    power_gap_db: float = 70.0
    eps1: float = 1.5
    eps2: float = 0.5
    # [frame]
    pilot_rate: Fraction = Fraction(1, 3)
    transient_s: float = 1e-6
    # [run]
    snr_db: float = 3.0
    ul_pilot_snr_db: float = 20.0
    n_frames: int = 200
    n_seeds: int = 3
    master_seed: int = 1
    doppler_scale: float = 1.0
    # [sweep]
    sweep_modes: tuple[str, ...] = ("tdd", "ifdd")
    sweep_pilot_rates: tuple[Fraction, ...] = (
        Fraction(1, 8), Fraction(1, 3), Fraction(1, 2), Fraction(1, 1))
    sweep_speeds_kmh: tuple[float, ...] = (10.0, 45.0, 100.0)

    SECTIONS = {
        "ofdm": ("bandwidth_hz", "n_sub_tdd", "n_sub_ifdd", "cp_tdd",
                 "cp_ifdd", "carrier_hz"),
        "channel": ("channel_order", "n_antennas", "coherence_bw_hz",
                    "coherence_time_s"),
        "impairments": ("impairments_enabled", "cfo_hz", "leakage_db",
                        "leakage_delays_s", "adc_bits", "power_gap_db",
                        "eps1", "eps2"),
        "frame": ("pilot_rate", "transient_s"),
        "run": ("snr_db", "ul_pilot_snr_db", "n_frames", "n_seeds",
                "master_seed", "doppler_scale"),
        "sweep": ("sweep_modes", "sweep_pilot_rates", "sweep_speeds_kmh"),
    }

    def ofdm_config(self, mode: DuplexMode) -> OfdmConfig:
        if mode == DuplexMode.TDD:
            return OfdmConfig(self.bandwidth_hz, self.n_sub_tdd, self.cp_tdd,
                              self.carrier_hz)
        return OfdmConfig(self.bandwidth_hz, self.n_sub_ifdd, self.cp_ifdd,
                          self.carrier_hz)

    def channel_config(self, doppler_hz: float = 0.0) -> ChannelModelConfig:
        return ChannelModelConfig(
            n_taps=self.channel_order + 1,
            n_antennas=self.n_antennas,
            doppler_hz=doppler_hz,
            coherence_bw_hz=self.coherence_bw_hz,
            coherence_time_s=self.coherence_time_s,
        )

    def impairment_config(self) -> ImpairmentConfig | None:
        if not self.impairments_enabled:
            return None
        if len(self.leakage_db) != len(self.leakage_delays_s):
            raise ConfigurationError(
                "leakage_db and leakage_delays_s must have equal lengths")
        paths = tuple(
            LeakagePath(rho=10.0 ** (db / 10.0), delay_s=d)
            for db, d in zip(self.leakage_db, self.leakage_delays_s)
        )
        return ImpairmentConfig(
            cfo_hz=self.cfo_hz,
            leakage=paths,
            adc_bits=self.adc_bits,
            tx_power_w=10.0 ** (self.power_gap_db / 10.0),
            rx_power_w=1.0,
            eps1=self.eps1,
            eps2=self.eps2,
        )

    def frame_config(self, mode: DuplexMode) -> FrameConfig:
        return FrameConfig(float(self.pilot_rate), self.transient_s, mode)

    def desk_scale(self) -> "ExperimentConfig":
        """Reduced defaults: 16 antennas, 256/512 subcarriers.

        Doppler is scaled up by the subcarrier reduction factor so that
        f_D * T products (and hence the fading-per-symbol physics) match the
        full-scale system; 'speed' then means km/h-equivalent.
        """
        factor = self.n_sub_tdd / 256
        return replace(
            self,
            n_sub_tdd=256, cp_tdd=32, n_sub_ifdd=512, cp_ifdd=64,
            n_antennas=16, doppler_scale=self.doppler_scale * factor,
        )

    def flat_items(self):
        for section, names in self.SECTIONS.items():
            for name in names:
                yield section, name, getattr(self, name)


_PARSERS = {
    float: float,
    int: int,
    bool: lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    Fraction: _fraction,
    tuple[float, ...]: _float_tuple,
    tuple[str, ...]: _str_tuple,
    tuple[Fraction, ...]: _fraction_tuple,
}


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 \
            else str(value.numerator)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def save_config(cfg: ExperimentConfig, path=None) -> str:
    """Serialize to INI text; optionally write it to `path`."""
    parser = configparser.ConfigParser()
    for section, name, value in cfg.flat_items():
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, name, _format_value(value))
    buf = io.StringIO()
    parser.write(buf)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def load_config(path_or_text, overrides: dict | None = None) -> ExperimentConfig:
    """Parse an INI config file (path or literal text) into a config.

    Unknown sections or keys raise ConfigurationError naming the offender,
    as do unparseable values.  `overrides` maps flat field names to string
    values and is applied on top.
    """
    parser = configparser.ConfigParser()
    text = None
    if hasattr(path_or_text, "read"):
        text = path_or_text.read()
    elif isinstance(path_or_text, str) and "\n" in path_or_text:
        text = path_or_text
    if text is not None:
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigurationError(f"config parse error: {exc}") from exc
    else:
        read = parser.read(path_or_text)
        if not read:
            raise ConfigurationError(f"cannot read config file {path_or_text}")

    field_types = {f.name: f.type for f in fields(ExperimentConfig)}
    by_name = {}
    known = {name for names in ExperimentConfig.SECTIONS.values() for name in names}
    section_of = {name: sec for sec, names in ExperimentConfig.SECTIONS.items()
                  for name in names}
    for section in parser.sections():
        if section not in ExperimentConfig.SECTIONS:
            raise ConfigurationError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in known or section_of[key] != section:
                raise ConfigurationError(
                    f"unknown key '{key}' in section [{section}]")
            by_name[key] = raw
    if overrides:
        for key, raw in overrides.items():
            if key not in known:
                raise ConfigurationError(f"unknown config field '{key}'")
            by_name[key] = raw

    kwargs = {}
    for key, raw in by_name.items():
        ftype = field_types[key]
        parse = _PARSERS.get(ftype)
        if parse is None:  # string-typed annotations from dataclass
            parse = _parse_annotation(ftype)
        try:
            kwargs[key] = parse(raw) if isinstance(raw, str) else raw
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(
                f"field '{key}': cannot parse {raw!r} ({exc})") from exc
    return ExperimentConfig(**kwargs)


def _parse_annotation(annotation):
    text = str(annotation)
    if "tuple[float" in text:
        return _float_tuple
    if "tuple[str" in text:
        return _str_tuple
    if "tuple[Fraction" in text or "tuple[fractions.Fraction" in text:
        return _fraction_tuple
    if "Fraction" in text:
        return _fraction
    if "bool" in text:
        return _PARSERS[bool]
    if "int" in text:
        return int
    return float


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """List every constraint violation without running anything.

    Covers numerology invariants, the coherence feasibility bound for both
    modes, reflection delays against the cyclic prefix and pilot-rate
    integrality.  An empty list means the config is runnable.
    """
    violations = []

    for mode in (DuplexMode.TDD, DuplexMode.IFDD):
        try:
            ofdm = cfg.ofdm_config(mode)
        except ConfigurationError as exc:
            violations.append(f"ofdm[{mode.value}]: {exc}")
            continue
        try:
            model = cfg.channel_config()
        except Exception as exc:
            violations.append(f"channel: {exc}")
            continue
        if model.n_taps - 1 > ofdm.cp_samples:
            violations.append(
                f"channel order {model.n_taps - 1} exceeds the "
                f"{mode.value} cyclic prefix of {ofdm.cp_samples} samples")
        verdict = coherence_check(ofdm, model, mode)
        if not verdict.feasible:
            violations.append(
                f"coherence bound fails for {mode.value}: time margin "
                f"{verdict.time_margin_s:.3e} s, bandwidth margin "
                f"{verdict.bw_margin_s:.3e} s")

    inv = 1 / cfg.pilot_rate
    if inv.denominator != 1:
        violations.append(
            f"pilot rate {cfg.pilot_rate} has a non-integer reciprocal {inv}")

    if len(cfg.leakage_db) != len(cfg.leakage_delays_s):
        violations.append("leakage_db and leakage_delays_s lengths differ")
    elif cfg.impairments_enabled:
        cp_s = cfg.cp_ifdd / cfg.bandwidth_hz
        for i, delay in enumerate(cfg.leakage_delays_s):
            if delay > cp_s:
                violations.append(
                    f"reflection delay {i + 1} of {delay:.3e} s exceeds the "
                    f"cyclic prefix duration {cp_s:.3e} s")

    for rate in cfg.sweep_pilot_rates:
        if (1 / rate).denominator != 1:
            violations.append(
                f"sweep pilot rate {rate} has a non-integer reciprocal")
    for mode_name in cfg.sweep_modes:
        if mode_name not in ("tdd", "ifdd"):
            violations.append(f"unknown sweep mode '{mode_name}'")

    return violations
