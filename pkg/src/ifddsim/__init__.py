"""Link-level simulator for TDD and subcarrier-interlaced FDD massive MIMO."""

__version__ = "0.1.0"

from .channel import (
    ChannelModelConfig,
    ChannelRealization,
    CoherenceVerdict,
    DuplexMode,
    coherence_check,
    correlation,
    ctf,
    ctf_grid,
    delta_h_ensemble,
    evolve,
    frequency_correlation,
    sample_tdl,
)
from .config import ExperimentConfig, load_config, save_config, validate_config
from .duplex import (
    ChannelEstimate,
    FrameConfig,
    FrameResult,
    IfddLink,
    SubcarrierAllocation,
    TddLink,
    estimate_channel,
    frame_duration,
    make_allocation,
    mr_precode,
    qpsk_demodulate,
    qpsk_modulate,
)
from .errors import ConfigurationError, DomainError, OrthogonalityError
from .evaluation import (
    RateRow,
    SweepPoint,
    achievable_rate,
    bicm_mi,
    binary_entropy,
    rate_summary,
    speed_to_doppler,
    sweep,
)
from .impairments import (
    ImpairmentConfig,
    LeakagePath,
    Stage,
    apply_cfo,
    loopback,
    quantize,
    sir_analytic,
    sqnr_analytic,
    sqnr_massive,
)
from .ofdm import OfdmConfig, demodulate, modulate, pulse_response

__all__ = [
    "__version__",
    "OfdmConfig", "modulate", "demodulate", "pulse_response",
    "DuplexMode", "ChannelModelConfig", "ChannelRealization",
    "CoherenceVerdict", "sample_tdl", "evolve", "ctf", "ctf_grid",
    "correlation", "delta_h_ensemble", "frequency_correlation",
    "coherence_check",
    "ImpairmentConfig", "LeakagePath", "Stage", "apply_cfo", "loopback",
    "quantize", "sqnr_analytic", "sqnr_massive", "sir_analytic",
    "SubcarrierAllocation", "make_allocation", "ChannelEstimate",
    "estimate_channel", "mr_precode", "FrameConfig", "frame_duration",
    "FrameResult", "TddLink", "IfddLink", "qpsk_modulate", "qpsk_demodulate",
    "binary_entropy", "bicm_mi", "achievable_rate", "rate_summary",
    "speed_to_doppler", "SweepPoint", "RateRow", "sweep",
    "ExperimentConfig", "load_config", "save_config", "validate_config",
    "ConfigurationError", "DomainError", "OrthogonalityError",
]
