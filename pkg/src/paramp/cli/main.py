"""paramp command-line interface.

Subcommands: derive (derived circuit quantities), pump (steady-state
integration), gain (gain profile CSV, optionally plotted), sweep (pump
power × frequency grid), noise (added-noise estimates from SNR data), and
plot (SVG overlay of gain CSVs).

Exit codes are exhaustive: 0 success, 2 configuration or input error,
3 solver non-convergence.  All numbers are serialized with 17 significant
digits so CSV outputs round-trip doubles losslessly and repeated runs are
byte-identical regardless of parallelism.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from ..noise import SQL_PHOTONS, ingest_noise_csv, n_add
from ..params import CODATA, bare_jpa_linewidth, derive_params, make_drive
from ..pump import ConvergenceError, ModelVariant, integrate_to_steady_state, \
    junction_drives
from ..scattering import bandwidth_metrics, default_grid, gain_profile
from .config import TWO_PI, ConfigError, RunConfig, load_config, model_from_name
from .plot import emit_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

GAIN_COLUMNS = ("delta_hz", "signal_freq_hz", "gain_db", "s_ss_re", "s_ss_im",
                "s_si_re", "s_si_im", "symplectic_residual")
SWEEP_COLUMNS = ("pump_power_dbm", "pump_freq_ghz", "converged",
                 "peak_gain_db", "bw_3db_mhz", "threshold_flag")
TRAJECTORY_COLUMNS = ("t_s", "re_alpha_t", "im_alpha_t", "re_alpha_j",
                      "im_alpha_j")
NOISE_COLUMNS = ("freq_ghz", "n_add_photons", "below_sql")


def _fmt(value: float) -> str:
    return "%.17g" % value


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    for warning in cfg.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if getattr(args, "model", None):
        cfg.model = model_from_name(args.model)
    return cfg


def _cmd_derive(args) -> int:
    cfg = _load(args)
    dev = cfg.device
    der = derive_params(dev)
    h = TWO_PI * CODATA.hbar
    drive = make_drive(cfg.pump_power_dbm, dev.omega_p)
    pairs = [
        ("e_j_over_h_ghz", der.e_j / h / 1e9),
        ("e_t_over_h_ghz", der.e_t / h / 1e9),
        ("z_j_ohm", der.z_j),
        ("z_t_ohm", der.z_t),
        ("c1", der.c1),
        ("c2", der.c2),
        ("kappa_over_2pi_ghz", der.kappa / TWO_PI / 1e9),
        ("alpha_in", drive.alpha_in),
    ]
    if not cfg.model.has_transformer:
        pairs.append(("kappa_j_over_2pi_ghz",
                      bare_jpa_linewidth(dev, der) / TWO_PI / 1e9))
    for name, value in pairs:
        print(f"{name} = {value:.10g}")
    if args.out:
        _write_csv(Path(args.out), ("name", "value"),
                   [(name, _fmt(value)) for name, value in pairs])
    return EXIT_OK


def _cmd_pump(args) -> int:
    cfg = _load(args)
    dev = cfg.device
    der = derive_params(dev)
    drive = make_drive(cfg.pump_power_dbm, dev.omega_p)
    trajectory = [] if args.trajectory else None
    report = integrate_to_steady_state(dev, der, drive, cfg.model,
                                       trajectory_out=trajectory)
    drives = junction_drives(report.state, der, dev.m_junctions)
    print(f"converged = {_fmt_bool(report.converged)}")
    print(f"residual = {report.residual:.6e} 1/s")
    print(f"elapsed_model_time = {report.elapsed_model_time:.6e} s")
    print(f"alpha_t = {report.state.alpha_t:.10g}")
    print(f"alpha_j = {report.state.alpha_j:.10g}")
    print(f"a_eff = {drives.a_eff:.10g}  phi_eff = {drives.phi_eff:.10g}")
    print(f"a_jpa = {drives.a_jpa:.10g}  phi_jpa = {drives.phi_jpa:.10g}")
    if args.out:
        header = ("converged", "residual_1_per_s", "elapsed_model_time_s",
                  "re_alpha_t", "im_alpha_t", "re_alpha_j", "im_alpha_j",
                  "a_eff", "phi_eff", "a_jpa", "phi_jpa")
        row = (_fmt_bool(report.converged), _fmt(report.residual),
               _fmt(report.elapsed_model_time),
               _fmt(report.state.alpha_t.real), _fmt(report.state.alpha_t.imag),
               _fmt(report.state.alpha_j.real), _fmt(report.state.alpha_j.imag),
               _fmt(drives.a_eff), _fmt(drives.phi_eff),
               _fmt(drives.a_jpa), _fmt(drives.phi_jpa))
        _write_csv(Path(args.out), header, [row])
    if args.trajectory:
        rows = [(_fmt(t), _fmt(at.real), _fmt(at.imag),
                 _fmt(aj.real), _fmt(aj.imag))
                for t, at, aj in trajectory]
        _write_csv(Path(args.trajectory), TRAJECTORY_COLUMNS, rows)
    return EXIT_OK if report.converged else EXIT_NONCONVERGED


def _gain_rows(profile) -> list[tuple]:
    rows = []
    for k in range(profile.delta.size):
        rows.append((
            _fmt(profile.delta[k] / TWO_PI),
            _fmt(profile.signal_freq[k] / TWO_PI),
            _fmt(profile.gain_db[k]),
            _fmt(profile.s_ss[k].real), _fmt(profile.s_ss[k].imag),
            _fmt(profile.s_si[k].real), _fmt(profile.s_si[k].imag),
            _fmt(profile.symplectic_residual[k]),
        ))
    return rows


def _cmd_gain(args) -> int:
    cfg = _load(args)
    dev = cfg.device
    der = derive_params(dev)
    drive = make_drive(cfg.pump_power_dbm, dev.omega_p)
    grid = default_grid(cfg.signal_span, cfg.signal_points)
    profile = gain_profile(dev, der, drive, cfg.model, grid)
    out = Path(args.out) if args.out else (cfg.out_csv or Path("gain.csv"))
    _write_csv(out, GAIN_COLUMNS, _gain_rows(profile))
    metrics = bandwidth_metrics(profile)
    bw = ("undefined (no 3 dB crossing inside the grid)"
          if metrics.bw_3db is None
          else f"{metrics.bw_3db / TWO_PI / 1e6:.6g} MHz")
    print(f"wrote {out}")
    print(f"peak_gain = {metrics.peak_gain_db:.6g} dB at "
          f"{(dev.omega_p + metrics.center) / TWO_PI / 1e9:.6g} GHz")
    print(f"bw_3db = {bw}")
    if args.plot:
        svg = cfg.out_svg or out.with_suffix(".svg")
        emit_svg([out], svg)
        print(f"wrote {svg}")
    return EXIT_OK


def _sweep_point(payload) -> tuple:
    """One sweep grid point; must stay top-level for process pools."""
    dev, power_dbm, freq_ghz, model_value, span, points = payload
    dev_pt = replace(dev, omega_p=TWO_PI * 1e9 * freq_ghz)
    der = derive_params(dev_pt)
    drive = make_drive(power_dbm, dev_pt.omega_p)
    model = ModelVariant(model_value)
    report = integrate_to_steady_state(dev_pt, der, drive, model)
    if not report.converged:
        return (power_dbm, freq_ghz, False, None, None, None)
    grid = default_grid(span, points)
    profile = gain_profile(dev_pt, der, drive, model, grid, report=report)
    flag = bool(profile.threshold_flag.any())
    try:
        metrics = bandwidth_metrics(profile)
    except ValueError:
        # every grid point sat on a threshold gap
        return (power_dbm, freq_ghz, True, math.nan, math.nan, True)
    bw_mhz = (math.nan if metrics.bw_3db is None
              else metrics.bw_3db / TWO_PI / 1e6)
    return (power_dbm, freq_ghz, True, metrics.peak_gain_db, bw_mhz, flag)


def _cmd_sweep(args) -> int:
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be at least 1, got {args.jobs}")
    cfg = _load(args)
    if cfg.sweep is None:
        raise ConfigError(f"{args.config}: sweep command needs a [sweep] "
                          "table with power and frequency ranges")
    ranges = cfg.sweep if not getattr(args, "model", None) \
        else replace(cfg.sweep, model=cfg.model)
    span = TWO_PI * 1e9 * ranges.signal_span_ghz
    payloads = [(cfg.device, power, freq, ranges.model.value, span,
                 ranges.signal_points)
                for power in ranges.powers_dbm()
                for freq in ranges.freqs_ghz()]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, payloads))
    else:
        results = [_sweep_point(p) for p in payloads]
    rows = []
    for power, freq, converged, peak, bw_mhz, flag in results:
        if not converged:
            rows.append((_fmt(power), _fmt(freq), _fmt_bool(False),
                         "", "", ""))
        else:
            rows.append((_fmt(power), _fmt(freq), _fmt_bool(True),
                         _fmt(peak), _fmt(bw_mhz), _fmt_bool(flag)))
    out = Path(args.out) if args.out else (cfg.out_csv or Path("sweep.csv"))
    _write_csv(out, SWEEP_COLUMNS, rows)
    print(f"wrote {out} ({len(rows)} points)")
    return EXIT_OK


def _cmd_noise(args) -> int:
    records = ingest_noise_csv(args.input)
    estimates = [n_add(record) for record in records]
    for k, est in enumerate(estimates):
        if est.negative:
            print(f"warning: row {k + 1}: n_add = {est.n_add:.4g} < 0 "
                  "(measurement scatter); reported unclamped",
                  file=sys.stderr)
    rows = [(_fmt(est.omega / TWO_PI / 1e9), _fmt(est.n_add),
             _fmt_bool(est.below_sql))
            for est in estimates]
    out = Path(args.out) if args.out else Path("noise.csv")
    _write_csv(out, NOISE_COLUMNS, rows)
    print(f"wrote {out} ({len(rows)} estimates; SQL reference "
          f"{SQL_PHOTONS} photons)")
    return EXIT_OK


def _cmd_plot(args) -> int:
    out = Path(args.out) if args.out else Path("plot.svg")
    emit_svg(args.inputs, out, title=args.title)
    print(f"wrote {out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paramp",
        description="Pump steady states, gain profiles, and added noise of "
                    "impedance-engineered Josephson parametric amplifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True, metavar="PATH",
                       help="TOML run file")
        p.add_argument("--model", choices=["full", "quartic", "bare"],
                       help="override the config's nonlinearity model")

    p = sub.add_parser("derive", help="print derived circuit quantities")
    add_config(p)
    p.add_argument("--out", metavar="PATH", help="also write name,value CSV")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("pump", help="integrate the pump to steady state")
    add_config(p)
    p.add_argument("--out", metavar="PATH", help="write one-row steady-state CSV")
    p.add_argument("--trajectory", metavar="PATH",
                   help="dump the integration trajectory as CSV")
    p.set_defaults(func=_cmd_pump)

    p = sub.add_parser("gain", help="compute a gain profile")
    add_config(p)
    p.add_argument("--out", metavar="PATH", help="gain CSV path")
    p.add_argument("--plot", action="store_true",
                   help="render the profile to SVG next to the CSV")
    p.set_defaults(func=_cmd_gain)

    p = sub.add_parser("sweep", help="sweep pump power and frequency")
    add_config(p)
    p.add_argument("--out", metavar="PATH", help="sweep CSV path")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="worker processes (results identical for any N)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("noise", help="added-noise estimates from SNR CSV")
    p.add_argument("input", metavar="CSV", help="measurement CSV")
    p.add_argument("--out", metavar="PATH", help="estimate CSV path")
    p.set_defaults(func=_cmd_noise)

    p = sub.add_parser("plot", help="overlay gain CSVs as SVG")
    p.add_argument("inputs", nargs="+", metavar="CSV", help="gain CSVs")
    p.add_argument("--out", metavar="PATH", help="SVG path")
    p.add_argument("--title", help="plot title")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
