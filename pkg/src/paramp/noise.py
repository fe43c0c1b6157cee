"""Added-noise estimation from pump-on/pump-off SNR measurements.

With the amplifier off, the measurement chain's noise is set by the
following-stage amplifier at temperature t_hemt; turning the pump on boosts
the signal by G while the chain noise referred to the input drops to
n_add + (chain)/G.  Comparing the two SNRs cancels the unknown signal power
and yields the single-stage Friis estimate

    n_add = t_hemt · (snr_off/snr_on − L/G) · k_b/(ħω)

in photons at the signal frequency ω.  The loss L ≥ 1 is the linear
attenuation between the amplifier and the following stage, so L/G in dB is
10^((L_dB − G_dB)/10) and the bracket vanishes exactly when the SNR change
is fully explained by gain and loss.  (The opposite loss convention — a
factor ≤ 1 — is the reciprocal; convert inputs accordingly if your
calibration reports it that way.)

Estimates inherit the raw measurement scatter: n_add can come out negative
when the SNR ratios are noisy.  Negative values are reported as-is and
flagged, never clamped, since clamping would bias averages of repeated
measurements.  The standard quantum limit for phase-preserving
amplification, 0.5 photons, is the comparison line carried into outputs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .params import CODATA, PhysicalConstants

#: standard quantum limit for phase-preserving amplification (photons)
SQL_PHOTONS = 0.5

#: input CSV column order (dB columns are converted to linear on ingest)
CSV_COLUMNS = ("freq_ghz", "snr_on_db", "snr_off_db",
               "gain_db", "loss_db", "t_hemt_k")


@dataclass(frozen=True)
class NoiseRecord:
    """One pump-on/pump-off measurement, all ratios linear."""

    omega: float        # signal angular frequency, rad/s
    snr_on: float       # linear power ratio, pump on
    snr_off: float      # linear power ratio, pump off
    gain: float         # linear power gain G
    loss: float         # linear attenuation factor L >= 1
    t_hemt: float       # following-stage noise temperature, K

    def __post_init__(self):
        for name in ("omega", "snr_on", "snr_off", "gain", "loss", "t_hemt"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if not self.gain > 1:
            raise ValueError(f"gain must exceed 1 (0 dB), got {self.gain!r}")
        if not self.loss >= 1:
            raise ValueError(
                f"loss must be >= 1 (attenuation-factor convention), got {self.loss!r}")


@dataclass(frozen=True)
class NoiseEstimate:
    """Added noise referred to the amplifier input."""

    omega: float
    n_add: float

    @property
    def below_sql(self) -> bool:
        return self.n_add < SQL_PHOTONS

    @property
    def negative(self) -> bool:
        """True when measurement scatter drove the estimate below zero."""
        return self.n_add < 0.0


def n_add(record: NoiseRecord, consts: PhysicalConstants = CODATA) -> NoiseEstimate:
    """Friis added-noise estimate for one measurement record."""
    bracket = record.snr_off / record.snr_on - record.loss / record.gain
    photons = record.t_hemt * bracket * consts.kb / (consts.hbar * record.omega)
    return NoiseEstimate(omega=record.omega, n_add=photons)


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def ingest_noise_csv(path) -> list[NoiseRecord]:
    """Read measurement rows from a CSV file.

    Expects a header with the columns freq_ghz, snr_on_db, snr_off_db,
    gain_db, loss_db, t_hemt_k.  dB columns are converted to linear ratios;
    freq_ghz becomes an angular frequency.  Malformed rows raise ValueError
    naming the 1-based source line; row order is preserved.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"noise CSV not found: {path}")
    records: list[NoiseRecord] = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file, expected header "
                             f"{','.join(CSV_COLUMNS)}")
        missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: header is missing columns {missing}")
        for row in reader:
            line = reader.line_num
            try:
                values = {c: float(row[c]) for c in CSV_COLUMNS}
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}: line {line}: non-numeric field "
                                 f"({exc})") from None
            try:
                records.append(NoiseRecord(
                    omega=2.0 * math.pi * values["freq_ghz"] * 1e9,
                    snr_on=_db_to_linear(values["snr_on_db"]),
                    snr_off=_db_to_linear(values["snr_off_db"]),
                    gain=_db_to_linear(values["gain_db"]),
                    loss=_db_to_linear(values["loss_db"]),
                    t_hemt=values["t_hemt_k"],
                ))
            except ValueError as exc:
                raise ValueError(f"{path}: line {line}: {exc}") from None
    return records
