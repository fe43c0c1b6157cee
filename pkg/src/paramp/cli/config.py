"""Run configuration: TOML ingestion, validation, and sweep ranges.

A run file is flat TOML — the device keys at top level, optional [sweep]
and [output] tables.  All frequencies cross the boundary in GHz,
inductances in nH, power in dBm; conversion to SI happens here and nowhere
else.  Unknown keys are reported as warnings (likely typos) rather than
errors so configs stay forward-compatible; structural problems raise
ConfigError, which the CLI maps to exit code 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:                       # python < 3.11
    import tomli as tomllib

from ..params import DeviceParams
from ..pump import ModelVariant

TWO_PI = 2.0 * math.pi

#: default signal grid, matching ~1.5 MHz steps over a ~1 GHz band
DEFAULT_SPAN_GHZ = 1.0
DEFAULT_POINTS = 667

_DEVICE_KEYS = ("omega_j_ghz", "omega_t_eff_ghz", "l_j_nh", "l_t_nh",
                "m_junctions", "r_env_ohm", "omega_p_ghz", "pump_power_dbm")
_TOP_KEYS = _DEVICE_KEYS + ("model",)
_SWEEP_KEYS = ("power_start_dbm", "power_stop_dbm", "power_step_dbm",
               "freq_start_ghz", "freq_stop_ghz", "freq_step_ghz",
               "signal_span_ghz", "signal_points")
_OUTPUT_KEYS = ("csv", "svg")

_MODEL_NAMES = {
    "full": ModelVariant.FULL_SINE_IEJPA,
    "quartic": ModelVariant.QUARTIC_IEJPA,
    "bare": ModelVariant.BARE_JPA_FULL_SINE,
}


class ConfigError(ValueError):
    """The run file is structurally invalid or inconsistent."""


def model_from_name(name: str) -> ModelVariant:
    try:
        return _MODEL_NAMES[name]
    except KeyError:
        raise ConfigError(
            f"unknown model {name!r}; expected one of "
            f"{', '.join(sorted(_MODEL_NAMES))}") from None


def _inclusive_range(start: float, stop: float, step: float,
                     what: str) -> list[float]:
    """start, start+step, ... through stop (inclusive up to rounding)."""
    if not step > 0:
        raise ConfigError(f"{what}: step must be positive, got {step!r}")
    if stop < start:
        raise ConfigError(f"{what}: stop {stop!r} is below start {start!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


@dataclass(frozen=True)
class SweepSpec:
    """Pump power × pump frequency grid with a per-point signal grid."""

    power_start_dbm: float
    power_stop_dbm: float
    power_step_dbm: float
    freq_start_ghz: float
    freq_stop_ghz: float
    freq_step_ghz: float
    signal_span_ghz: float
    signal_points: int
    model: ModelVariant

    def __post_init__(self):
        # validate by materializing both ranges
        self.powers_dbm()
        self.freqs_ghz()
        if self.signal_points < 2:
            raise ConfigError(
                f"signal_points must be at least 2, got {self.signal_points}")
        if not self.signal_span_ghz > 0:
            raise ConfigError(
                f"signal_span_ghz must be positive, got {self.signal_span_ghz!r}")

    def powers_dbm(self) -> list[float]:
        return _inclusive_range(self.power_start_dbm, self.power_stop_dbm,
                                self.power_step_dbm, "sweep power range")

    def freqs_ghz(self) -> list[float]:
        return _inclusive_range(self.freq_start_ghz, self.freq_stop_ghz,
                                self.freq_step_ghz, "sweep frequency range")


@dataclass
class RunConfig:
    """Everything a CLI command needs, in SI units."""

    device: DeviceParams
    pump_power_dbm: float
    model: ModelVariant
    signal_span: float          # rad/s
    signal_points: int
    sweep: SweepSpec | None
    out_csv: Path | None
    out_svg: Path | None
    warnings: list[str] = field(default_factory=list)

    def signal_grid_args(self) -> tuple[float, int]:
        return self.signal_span, self.signal_points


def _require(table: dict, key: str, kinds: tuple[type, ...], path: Path):
    if key not in table:
        raise ConfigError(f"{path}: missing required key {key!r}")
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise ConfigError(
            f"{path}: key {key!r} must be "
            f"{' or '.join(k.__name__ for k in kinds)}, got {value!r}")
    return value


def load_config(path) -> RunConfig:
    """Parse and validate a run file.

    Raises ConfigError on structural problems; collects warnings (unknown
    keys) on the returned RunConfig rather than failing, so a typo in an
    optional key is visible without being fatal.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    warnings: list[str] = []
    for key in raw:
        if key not in _TOP_KEYS + ("sweep", "output"):
            warnings.append(f"{path}: unknown key {key!r} ignored")

    num = (int, float)
    m_junctions = _require(raw, "m_junctions", (int,), path)
    try:
        device = DeviceParams(
            omega_j=TWO_PI * 1e9 * _require(raw, "omega_j_ghz", num, path),
            omega_t_eff=TWO_PI * 1e9 * _require(raw, "omega_t_eff_ghz", num, path),
            l_j=1e-9 * _require(raw, "l_j_nh", num, path),
            l_t=1e-9 * _require(raw, "l_t_nh", num, path),
            m_junctions=m_junctions,
            r_env=float(_require(raw, "r_env_ohm", num, path)),
            omega_p=TWO_PI * 1e9 * _require(raw, "omega_p_ghz", num, path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    power_dbm = float(_require(raw, "pump_power_dbm", num, path))

    model_name = raw.get("model", "full")
    if not isinstance(model_name, str):
        raise ConfigError(f"{path}: key 'model' must be a string, got {model_name!r}")
    model = model_from_name(model_name)

    span_ghz = DEFAULT_SPAN_GHZ
    points = DEFAULT_POINTS
    sweep = None
    if "sweep" in raw:
        table = raw["sweep"]
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: [sweep] must be a table")
        for key in table:
            if key not in _SWEEP_KEYS:
                warnings.append(f"{path}: unknown [sweep] key {key!r} ignored")
        span_ghz = table.get("signal_span_ghz", DEFAULT_SPAN_GHZ)
        points = table.get("signal_points", DEFAULT_POINTS)
        if isinstance(points, bool) or not isinstance(points, int):
            raise ConfigError(f"{path}: signal_points must be an integer, "
                              f"got {points!r}")
        range_keys = [k for k in _SWEEP_KEYS[:6] if k in table]
        if range_keys and len(range_keys) != 6:
            missing = [k for k in _SWEEP_KEYS[:6] if k not in table]
            raise ConfigError(
                f"{path}: [sweep] ranges are all-or-nothing; missing {missing}")
        if range_keys:
            try:
                sweep = SweepSpec(
                    power_start_dbm=float(table["power_start_dbm"]),
                    power_stop_dbm=float(table["power_stop_dbm"]),
                    power_step_dbm=float(table["power_step_dbm"]),
                    freq_start_ghz=float(table["freq_start_ghz"]),
                    freq_stop_ghz=float(table["freq_stop_ghz"]),
                    freq_step_ghz=float(table["freq_step_ghz"]),
                    signal_span_ghz=float(span_ghz),
                    signal_points=points,
                    model=model,
                )
            except ConfigError as exc:
                raise ConfigError(f"{path}: {exc}") from None

    out_csv = out_svg = None
    if "output" in raw:
        table = raw["output"]
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: [output] must be a table")
        for key in table:
            if key not in _OUTPUT_KEYS:
                warnings.append(f"{path}: unknown [output] key {key!r} ignored")
        if "csv" in table:
            out_csv = Path(str(table["csv"]))
        if "svg" in table:
            out_svg = Path(str(table["svg"]))

    if not isinstance(span_ghz, (int, float)) or isinstance(span_ghz, bool) \
            or not span_ghz > 0:
        raise ConfigError(f"{path}: signal_span_ghz must be a positive number, "
                          f"got {span_ghz!r}")
    if points < 2:
        raise ConfigError(f"{path}: signal_points must be at least 2, got {points}")

    if not math.isfinite(power_dbm):
        raise ConfigError(f"{path}: pump_power_dbm must be finite, got {power_dbm!r}")

    return RunConfig(device=device, pump_power_dbm=power_dbm, model=model,
                     signal_span=TWO_PI * 1e9 * float(span_ghz),
                     signal_points=points, sweep=sweep,
                     out_csv=out_csv, out_svg=out_svg, warnings=warnings)
