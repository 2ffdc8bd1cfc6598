"""Deterministic regeneration of the analysis figures as CSV files.

Every CSV is self-describing: '#'-prefixed header comments carry the figure
id, the seed and the fully resolved configuration, followed by a column-name
row and one data row per grid point.  Identical config + seed produces a
byte-identical file.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .channel import ChannelModelConfig, DuplexMode, delta_h_ensemble, frequency_correlation
from .config import ExperimentConfig, _format_value
from .errors import ConfigurationError
from .evaluation import SweepPoint, RateRow, sweep
from .impairments import ImpairmentConfig, LeakagePath, Stage, sir_analytic, sqnr_massive

__all__ = ["FIGURE_NAMES", "run_figure", "sweep_points", "write_csv"]

FIG3_SUBCARRIERS = (64, 128, 256, 512, 1024, 2048)
FIG3_ORDERS = (2, 10, 50)
FIG3_REALIZATIONS = 1000
FIG3_ANTENNAS = 8  # pooled into the correlation estimate, see channel module
FIG5_POINTS = 40
FIG6_ANTENNAS = tuple(2 ** k for k in range(11))
FIG6_RHO_DB = (-10.0, -30.0)
FIG12_SPEEDS_KMH = (25.0, 50.0, 100.0, 150.0, 225.0, 325.0, 475.0, 700.0)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, figure: str, cfg: ExperimentConfig, seed: int,
              columns: list[str], rows: list[tuple], extra_meta=()) -> None:
    lines = [
        f"# ifddsim={__version__} figure={figure}",
        f"# seed={seed}",
    ]
    for key, value in extra_meta:
        lines.append(f"# {key}={value}")
    for section, name, value in cfg.flat_items():
        lines.append(f"# config.{section}.{name}={_format_value(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _fig3(cfg: ExperimentConfig, seed: int):
    columns = ["n_sub", "channel_order", "delta_h", "delta_h_analytic"]
    rows = []
    index = 0
    for order in FIG3_ORDERS:
        for n_sub in FIG3_SUBCARRIERS:
            model = ChannelModelConfig(
                n_taps=order + 1, n_antennas=FIG3_ANTENNAS, doppler_hz=0.0,
                coherence_bw_hz=cfg.coherence_bw_hz,
                coherence_time_s=cfg.coherence_time_s,
            )
            measured = delta_h_ensemble(
                model, n_sub, delta_f=1, delta_t_s=0.0,
                n_realizations=FIG3_REALIZATIONS,
                seed=seed * 10_007 + index,
            )
            rows.append((n_sub, order, measured,
                         frequency_correlation(order + 1, n_sub, 1)))
            index += 1
    meta = (("n_realizations", FIG3_REALIZATIONS), ("n_antennas", FIG3_ANTENNAS))
    return columns, rows, meta


def _fig5(cfg: ExperimentConfig, seed: int):
    ofdm = cfg.ofdm_config(DuplexMode.TDD)
    offsets = np.logspace(-3, math.log10(0.5), FIG5_POINTS)
    columns = ["f_off_over_fsub", "sir_db"]
    rows = []
    for eps in offsets:
        sir = sir_analytic(eps * ofdm.subcarrier_spacing_hz, 2, ofdm)
        rows.append((float(eps), 10.0 * math.log10(sir)))
    return columns, rows, (("subcarrier", 2), ("n_sub", ofdm.n_sub))


def _fig6(cfg: ExperimentConfig, seed: int):
    columns = ["n_antennas", "rho_db", "sqnr_db"]
    rows = []
    for rho_db in FIG6_RHO_DB:
        for m in FIG6_ANTENNAS:
            imp = ImpairmentConfig(
                # one aggregate path carries the scenario rho
                leakage=(LeakagePath(rho=10.0 ** (rho_db / 10.0)),),
                adc_bits=cfg.adc_bits,
                tx_power_w=10.0 ** (cfg.power_gap_db / 10.0),
                rx_power_w=1.0,
                eps1=cfg.eps1,
                eps2=cfg.eps2,
            )
            sqnr = sqnr_massive(imp, m, Stage.UPLINK_PILOT_DATA)
            rows.append((m, rho_db, 10.0 * math.log10(sqnr)))
    meta = (("adc_bits", cfg.adc_bits), ("power_gap_db", cfg.power_gap_db),
            ("stage", "uplink"))
    return columns, rows, meta


def sweep_points(cfg: ExperimentConfig, pilot_rates, speeds) -> list[SweepPoint]:
    points = []
    impairments = cfg.impairment_config()
    for rate in pilot_rates:
        for speed in speeds:
            for mode_name in cfg.sweep_modes:
                mode = DuplexMode(mode_name)
                ofdm = cfg.ofdm_config(mode)
                points.append(SweepPoint(
                    mode=mode,
                    pilot_rate=float(rate),
                    n_antennas=cfg.n_antennas,
                    speed_kmh=float(speed),
                    snr_db=cfg.snr_db,
                    bandwidth_hz=cfg.bandwidth_hz,
                    n_sub=ofdm.n_sub,
                    cp_samples=ofdm.cp_samples,
                    carrier_hz=cfg.carrier_hz,
                    channel_order=cfg.channel_order,
                    coherence_bw_hz=cfg.coherence_bw_hz,
                    coherence_time_s=cfg.coherence_time_s,
                    transient_s=cfg.transient_s,
                    ul_pilot_snr_db=cfg.ul_pilot_snr_db,
                    n_frames=cfg.n_frames,
                    doppler_scale=cfg.doppler_scale,
                    impairments=impairments if mode == DuplexMode.IFDD else None,
                ))
    return points


def _run_rate_figure(cfg: ExperimentConfig, seed: int, pilot_rates, speeds,
                     threads: int):
    points = sweep_points(cfg, pilot_rates, speeds)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = sweep(points, master_seed=seed, n_seeds=cfg.n_seeds,
                         executor=pool)
    else:
        rows = sweep(points, master_seed=seed, n_seeds=cfg.n_seeds)
    columns = RateRow.columns()
    out = [tuple(getattr(r, c) for c in columns) for r in rows]
    return columns, out, (("n_points", len(points)),)


def _fig11(cfg: ExperimentConfig, seed: int, threads: int = 1):
    return _run_rate_figure(cfg, seed, cfg.sweep_pilot_rates,
                            cfg.sweep_speeds_kmh, threads)


def _fig12(cfg: ExperimentConfig, seed: int, threads: int = 1):
    return _run_rate_figure(cfg, seed, cfg.sweep_pilot_rates,
                            FIG12_SPEEDS_KMH, threads)


FIGURE_NAMES = ("fig3", "fig5", "fig6", "fig11", "fig12")


def run_figure(name: str, cfg: ExperimentConfig, out_path, seed: int | None = None,
               desk_scale: bool = False, threads: int = 1) -> dict:
    """Produce one figure CSV; returns a summary of the run.

    The summary holds the row count, flagged-row count, elapsed seconds and
    the seed, matching what the CLI prints.
    """
    if name not in FIGURE_NAMES:
        raise ConfigurationError(
            f"unknown figure '{name}', expected one of {FIGURE_NAMES}")
    if desk_scale:
        cfg = cfg.desk_scale()
    if seed is None:
        seed = cfg.master_seed
    start = time.perf_counter()
    if name == "fig3":
        columns, rows, meta = _fig3(cfg, seed)
    elif name == "fig5":
        columns, rows, meta = _fig5(cfg, seed)
    elif name == "fig6":
        columns, rows, meta = _fig6(cfg, seed)
    elif name == "fig11":
        columns, rows, meta = _fig11(cfg, seed, threads)
    else:
        columns, rows, meta = _fig12(cfg, seed, threads)
    elapsed = time.perf_counter() - start
    flagged = 0
    if "flagged" in columns:
        idx = columns.index("flagged")
        flagged = sum(1 for r in rows if r[idx])
    write_csv(out_path, name, cfg, seed, columns, rows,
              extra_meta=tuple(meta) + (("desk_scale", desk_scale),))
    return {
        "figure": name,
        "rows": len(rows),
        "flagged": flagged,
        "seconds": elapsed,
        "seed": seed,
        "path": str(out_path),
    }
