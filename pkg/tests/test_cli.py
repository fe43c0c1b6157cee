"""Command-line interface: subcommands, file formats, exit codes.

Commands run in-process through main(argv), which returns the exit code
the console script would pass to sys.exit.  Determinism claims are tested
as byte equality of the produced files.
"""

from __future__ import annotations

import csv
import math
from importlib import resources
from pathlib import Path

import pytest

from paramp.cli.config import ConfigError, load_config
from paramp.cli.main import (EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_OK,
                             GAIN_COLUMNS, NOISE_COLUMNS, SWEEP_COLUMNS,
                             TRAJECTORY_COLUMNS, main)

TWO_PI = 2.0 * math.pi

FAST_DEVICE = """\
omega_j_ghz = 6.5
omega_t_eff_ghz = 6.218
l_j_nh = 0.37
l_t_nh = 1.9
m_junctions = 3
r_env_ohm = 50.0
omega_p_ghz = 5.347
pump_power_dbm = -120.0
model = "full"

[sweep]
signal_span_ghz = 1.0
signal_points = 41
"""

FAST_SWEEP = FAST_DEVICE + """\
power_start_dbm = -130.0
power_stop_dbm = -124.0
power_step_dbm = 6.0
freq_start_ghz = 5.346
freq_stop_ghz = 5.348
freq_step_ghz = 0.002
"""


@pytest.fixture
def fast_config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(FAST_DEVICE)
    return str(path)


@pytest.fixture
def sweep_config(tmp_path):
    path = tmp_path / "sweep.toml"
    path.write_text(FAST_SWEEP)
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def bundled(name: str) -> str:
    return str(resources.files("paramp.configs") / name)


# ---------------------------------------------------------------- config


def test_bundled_configs_load_cleanly():
    for name, points in (("benchmark_iejpa.toml", 5), ("benchmark_bare_jpa.toml", 5)):
        cfg = load_config(bundled(name))
        assert cfg.warnings == []
        assert cfg.sweep is not None
        assert len(cfg.sweep.powers_dbm()) == points
        assert cfg.sweep.freqs_ghz() == [5.347]
    cfg = load_config(bundled("benchmark_iejpa.toml"))
    assert cfg.device.omega_j == pytest.approx(TWO_PI * 6.5e9, rel=1e-15)
    assert cfg.pump_power_dbm == -88.0
    assert cfg.signal_points == 667


def test_config_missing_key(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text(FAST_DEVICE.replace("l_t_nh = 1.9\n", ""))
    with pytest.raises(ConfigError, match="l_t_nh"):
        load_config(path)


def test_config_all_or_nothing_sweep_ranges(tmp_path):
    path = tmp_path / "half.toml"
    path.write_text(FAST_SWEEP.replace("freq_step_ghz = 0.002\n", ""))
    with pytest.raises(ConfigError, match="all-or-nothing"):
        load_config(path)


def test_unknown_key_warns_but_runs(tmp_path, capsys):
    path = tmp_path / "typo.toml"
    path.write_text("pump_powr_dbm = -100.0\n" + FAST_DEVICE)
    out = tmp_path / "g.csv"
    assert main(["gain", "--config", str(path), "--out", str(out)]) == EXIT_OK
    err = capsys.readouterr().err
    assert "unknown key" in err and "pump_powr_dbm" in err
    assert out.exists()


# ---------------------------------------------------------------- derive


def test_derive_prints_circuit_quantities(fast_config, tmp_path, capsys):
    out = tmp_path / "derived.csv"
    assert main(["derive", "--config", fast_config,
                 "--out", str(out)]) == EXIT_OK
    values = {}
    for line in capsys.readouterr().out.splitlines():
        name, _, value = line.partition(" = ")
        values[name] = float(value)
    assert values["e_j_over_h_ghz"] == pytest.approx(441.7878725, rel=1e-9)
    assert values["c1"] == pytest.approx(0.1900988127, rel=1e-9)
    assert values["c2"] == pytest.approx(0.08576987666, rel=1e-9)
    assert values["kappa_over_2pi_ghz"] == pytest.approx(4.188287976, rel=1e-9)
    rows = read_rows(out)
    assert rows[0] == ["name", "value"]
    csv_values = {name: float(v) for name, v in rows[1:]}
    assert csv_values == pytest.approx(values)


def test_derive_bare_includes_jpa_linewidth(tmp_path, capsys):
    assert main(["derive", "--config", bundled("benchmark_bare_jpa.toml")]) \
        == EXIT_OK
    out = capsys.readouterr().out
    assert "kappa_j_over_2pi_ghz" in out
    line = [l for l in out.splitlines()
            if l.startswith("kappa_j_over_2pi_ghz")][0]
    assert float(line.partition(" = ")[2]) == pytest.approx(2.0174, rel=1e-4)


# ------------------------------------------------------------------ pump


def test_pump_writes_state_and_trajectory(tmp_path, capsys):
    out = tmp_path / "pump.csv"
    traj = tmp_path / "traj.csv"
    assert main(["pump", "--config", bundled("benchmark_iejpa.toml"),
                 "--out", str(out), "--trajectory", str(traj)]) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "converged = true" in stdout

    rows = read_rows(out)
    record = dict(zip(rows[0], rows[1]))
    assert record["converged"] == "true"
    assert float(record["a_jpa"]) == pytest.approx(2.2840723, rel=1e-6)
    a_t = complex(float(record["re_alpha_t"]), float(record["im_alpha_t"]))
    assert abs(a_t) == pytest.approx(0.4185142, rel=1e-6)

    trows = read_rows(traj)
    assert tuple(trows[0]) == TRAJECTORY_COLUMNS
    assert [float(v) for v in trows[1]] == [0.0, 0.0, 0.0, 0.0, 0.0]
    assert len(trows) > 10


def test_pump_nonconvergence_exit_code(tmp_path, capsys):
    """A pump driven into a limit cycle exits 3 with converged = false.

    At −80 dBm the full-sine pump never settles (the integrator runs out
    its 1e4/κ horizon), which takes a few seconds of wall time.
    """
    path = tmp_path / "hot.toml"
    path.write_text(FAST_DEVICE.replace("pump_power_dbm = -120.0",
                                        "pump_power_dbm = -80.0"))
    out = tmp_path / "pump.csv"
    code = main(["pump", "--config", str(path), "--out", str(out)])
    assert code == EXIT_NONCONVERGED
    assert "converged = false" in capsys.readouterr().out
    rows = read_rows(out)
    assert dict(zip(rows[0], rows[1]))["converged"] == "false"


# ------------------------------------------------------------------ gain


def test_gain_csv_layout_and_determinism(fast_config, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gain", "--config", fast_config, "--out", str(a)]) == EXIT_OK
    assert main(["gain", "--config", fast_config, "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()

    rows = read_rows(a)
    assert tuple(rows[0]) == GAIN_COLUMNS
    assert len(rows) == 1 + 41
    deltas = [float(r[0]) for r in rows[1:]]
    assert all(x < y for x, y in zip(deltas, deltas[1:]))
    assert min(abs(d) for d in deltas) > 0
    # unpumped to 9 digits at -120 dBm
    assert max(abs(float(r[2])) for r in rows[1:]) < 1e-6


def test_gain_model_override_changes_profile(fast_config, tmp_path):
    full, quartic = tmp_path / "f.csv", tmp_path / "q.csv"
    assert main(["gain", "--config", fast_config,
                 "--out", str(full)]) == EXIT_OK
    assert main(["gain", "--config", fast_config, "--model", "quartic",
                 "--out", str(quartic)]) == EXIT_OK
    assert full.read_bytes() != quartic.read_bytes()


def test_gain_plot_flag_renders_svg(fast_config, tmp_path, capsys):
    out = tmp_path / "profile.csv"
    assert main(["gain", "--config", fast_config, "--out", str(out),
                 "--plot"]) == EXIT_OK
    svg = tmp_path / "profile.svg"
    assert svg.exists()
    text = svg.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "gain (dB)" in text
    assert "wrote" in capsys.readouterr().out


def test_gain_uses_config_output_path(tmp_path, monkeypatch):
    path = tmp_path / "run.toml"
    path.write_text(FAST_DEVICE + '\n[output]\ncsv = "fromcfg.csv"\n')
    monkeypatch.chdir(tmp_path)
    assert main(["gain", "--config", str(path)]) == EXIT_OK
    assert (tmp_path / "fromcfg.csv").exists()


# ----------------------------------------------------------------- sweep


def test_sweep_serial_and_parallel_identical(sweep_config, tmp_path):
    serial, parallel = tmp_path / "s1.csv", tmp_path / "s4.csv"
    assert main(["sweep", "--config", sweep_config,
                 "--out", str(serial)]) == EXIT_OK
    assert main(["sweep", "--config", sweep_config, "--out", str(parallel),
                 "--jobs", "4"]) == EXIT_OK
    assert serial.read_bytes() == parallel.read_bytes()

    rows = read_rows(serial)
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 1 + 2 * 2
    for row in rows[1:]:
        assert row[2] == "true"
        assert abs(float(row[3])) < 1e-6       # no gain this deep below pump
    powers = [float(r[0]) for r in rows[1:]]
    assert powers == [-130.0, -130.0, -124.0, -124.0]


def test_sweep_needs_ranges(fast_config, capsys):
    assert main(["sweep", "--config", fast_config]) == EXIT_CONFIG
    assert "[sweep]" in capsys.readouterr().err


def test_sweep_rejects_bad_jobs(sweep_config, capsys):
    assert main(["sweep", "--config", sweep_config, "--jobs", "0"]) \
        == EXIT_CONFIG
    assert "--jobs" in capsys.readouterr().err


# ----------------------------------------------------------------- noise


def test_noise_estimates_and_negative_warning(tmp_path, capsys):
    src = tmp_path / "meas.csv"
    src.write_text(
        "freq_ghz,snr_on_db,snr_off_db,gain_db,loss_db,t_hemt_k\n"
        "5.347,20,10,18,1.8,3.6\n"       # the benchmark estimate
        "5.347,10,0,10,0,3.6\n"          # bracket cancels exactly
        "5.347,10,-10,10,0,3.6\n")       # scatter drove it negative
    out = tmp_path / "n.csv"
    assert main(["noise", str(src), "--out", str(out)]) == EXIT_OK

    rows = read_rows(out)
    assert tuple(rows[0]) == NOISE_COLUMNS
    n_adds = [float(r[1]) for r in rows[1:]]
    flags = [r[2] for r in rows[1:]]
    assert n_adds[0] == pytest.approx(1.0663501859778532, rel=1e-12)
    assert n_adds[1] == 0.0
    assert n_adds[2] < 0.0
    assert flags == ["false", "true", "true"]

    err = capsys.readouterr().err
    assert "row 3" in err and "unclamped" in err


def test_noise_malformed_row_is_config_error(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("freq_ghz,snr_on_db,snr_off_db,gain_db,loss_db,t_hemt_k\n"
                   "5.347,abc,10,18,1.8,3.6\n")
    assert main(["noise", str(src)]) == EXIT_CONFIG
    assert "line 2" in capsys.readouterr().err


def test_noise_missing_file(tmp_path, capsys):
    assert main(["noise", str(tmp_path / "nope.csv")]) == EXIT_CONFIG
    assert "not found" in capsys.readouterr().err


# ------------------------------------------------------------------ plot


@pytest.fixture
def two_profiles(fast_config, tmp_path):
    alpha = tmp_path / "alpha.csv"
    beta = tmp_path / "beta.csv"
    assert main(["gain", "--config", fast_config, "--out", str(alpha)]) \
        == EXIT_OK
    assert main(["gain", "--config", fast_config, "--model", "quartic",
                 "--out", str(beta)]) == EXIT_OK
    return alpha, beta


def test_plot_overlay_deterministic(two_profiles, tmp_path):
    alpha, beta = two_profiles
    first, second = tmp_path / "p1.svg", tmp_path / "p2.svg"
    args = ["plot", str(alpha), str(beta), "--title", "model comparison"]
    assert main(args + ["--out", str(first)]) == EXIT_OK
    assert main(args + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()

    text = first.read_text()
    assert "alpha" in text and "beta" in text     # legend entries
    assert "model comparison" in text
    assert "frequency (GHz)" in text


def test_plot_rejects_wrong_columns(tmp_path, capsys):
    bad = tmp_path / "wrong.csv"
    bad.write_text("x,y\n1,2\n")
    assert main(["plot", str(bad)]) == EXIT_CONFIG
    assert "signal_freq_hz" in capsys.readouterr().err


# ------------------------------------------------------------ exit codes


def test_missing_config_is_exit_2(tmp_path, capsys):
    assert main(["gain", "--config", str(tmp_path / "none.toml")]) \
        == EXIT_CONFIG
    assert "not found" in capsys.readouterr().err


def test_unknown_model_flag_is_exit_2(fast_config, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["gain", "--config", fast_config, "--model", "cubic"])
    assert excinfo.value.code == 2
