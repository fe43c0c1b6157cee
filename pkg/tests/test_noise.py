"""Friis added-noise estimation and measurement CSV ingestion."""

from __future__ import annotations

import math

import pytest

from paramp import (CODATA, SQL_PHOTONS, NoiseEstimate, NoiseRecord,
                    ingest_noise_csv, n_add)

TWO_PI = 2.0 * math.pi

OMEGA_REF = TWO_PI * 5.347e9


def reference_record(**overrides):
    """3.6 K stage behind 1.8 dB of loss, 18 dB gain, 10 dB SNR drop."""
    fields = dict(omega=OMEGA_REF, snr_on=100.0, snr_off=10.0,
                  gain=10.0 ** 1.8, loss=10.0 ** 0.18, t_hemt=3.6)
    fields.update(overrides)
    return NoiseRecord(**fields)


def test_worked_example():
    estimate = n_add(reference_record())
    assert abs(estimate.n_add - 1.066) < 1e-3
    assert estimate.n_add == pytest.approx(1.0663501859778532, rel=1e-12)
    assert not estimate.below_sql
    assert not estimate.negative
    assert estimate.omega == OMEGA_REF


def test_thermal_occupancy_prefactor():
    """kb·T/(ħω) at 3.6 K, 5.347 GHz is 14.029 photons per SNR unit."""
    prefactor = CODATA.kb * 3.6 / (CODATA.hbar * OMEGA_REF)
    assert prefactor == pytest.approx(14.0289, rel=1e-3)


def test_zero_bracket_is_exactly_zero():
    """SNR drop fully explained by gain and loss: bracket cancels exactly."""
    record = NoiseRecord(omega=OMEGA_REF, snr_on=2.0, snr_off=1.0,
                         gain=2.0, loss=1.0, t_hemt=3.6)
    estimate = n_add(record)
    assert estimate.n_add == 0.0
    assert estimate.below_sql
    assert not estimate.negative


def test_linear_in_stage_temperature():
    one = n_add(reference_record(t_hemt=3.6)).n_add
    two = n_add(reference_record(t_hemt=7.2)).n_add
    assert two == pytest.approx(2.0 * one, rel=1e-14)


def test_monotone_in_snrs():
    base = n_add(reference_record()).n_add
    assert n_add(reference_record(snr_on=120.0)).n_add < base
    assert n_add(reference_record(snr_off=12.0)).n_add > base


def test_scale_invariance_of_snr_pair():
    base = n_add(reference_record()).n_add
    scaled = n_add(reference_record(snr_on=700.0, snr_off=70.0)).n_add
    assert scaled == pytest.approx(base, rel=1e-14)


def test_negative_estimate_flagged_not_clamped():
    """Pump-off SNR below the gain/loss prediction: scatter went negative."""
    record = reference_record(snr_off=1.0)       # ratio 0.01 < L/G = 10^-1.62
    estimate = n_add(record)
    assert estimate.n_add < 0.0
    assert estimate.negative
    assert estimate.below_sql


def test_below_sql_boundary():
    assert SQL_PHOTONS == 0.5
    assert NoiseEstimate(omega=OMEGA_REF, n_add=0.499).below_sql
    assert not NoiseEstimate(omega=OMEGA_REF, n_add=0.501).below_sql


@pytest.mark.parametrize("field,value", [
    ("omega", 0.0),
    ("omega", -1.0),
    ("snr_on", 0.0),
    ("snr_off", float("nan")),
    ("gain", 1.0),
    ("gain", 0.5),
    ("loss", 0.9),
    ("t_hemt", 0.0),
])
def test_record_validation_names_field(field, value):
    with pytest.raises(ValueError, match=field):
        reference_record(**{field: value})


# --------------------------------------------------------------- ingest


HEADER = "freq_ghz,snr_on_db,snr_off_db,gain_db,loss_db,t_hemt_k\n"


def test_ingest_round_trip(tmp_path):
    path = tmp_path / "meas.csv"
    path.write_text(HEADER + "5.347,20,10,18,1.8,3.6\n")
    records = ingest_noise_csv(path)
    assert len(records) == 1
    r = records[0]
    assert r.omega == pytest.approx(OMEGA_REF, rel=1e-15)
    assert r.snr_on == pytest.approx(100.0, rel=1e-15)
    assert r.snr_off == pytest.approx(10.0, rel=1e-15)
    assert r.gain == pytest.approx(10.0 ** 1.8, rel=1e-15)
    assert r.loss == pytest.approx(10.0 ** 0.18, rel=1e-15)
    assert r.t_hemt == 3.6
    assert n_add(r).n_add == pytest.approx(1.0663501859778532, rel=1e-12)


def test_ingest_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER)
    assert ingest_noise_csv(path) == []


def test_ingest_preserves_row_order(tmp_path):
    path = tmp_path / "many.csv"
    rows = [f"{f},20,10,18,1.8,3.6\n" for f in (7.0, 5.0, 6.0)]
    path.write_text(HEADER + "".join(rows))
    freqs = [r.omega / (TWO_PI * 1e9) for r in ingest_noise_csv(path)]
    assert freqs == pytest.approx([7.0, 5.0, 6.0])


def test_ingest_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ingest_noise_csv(tmp_path / "nope.csv")


def test_ingest_missing_column(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("freq_ghz,snr_on_db,snr_off_db,gain_db,loss_db\n"
                    "5.347,20,10,18,1.8\n")
    with pytest.raises(ValueError, match="t_hemt_k"):
        ingest_noise_csv(path)


def test_ingest_non_numeric_row_names_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(HEADER
                    + "5.347,20,10,18,1.8,3.6\n"
                    + "5.347,twenty,10,18,1.8,3.6\n")
    with pytest.raises(ValueError, match="line 3"):
        ingest_noise_csv(path)


def test_ingest_invalid_value_names_field_and_line(tmp_path):
    path = tmp_path / "zero_snr.csv"
    path.write_text(HEADER + "5.347,-inf,10,18,1.8,3.6\n")
    with pytest.raises(ValueError, match="line 2.*snr_on"):
        ingest_noise_csv(path)


def test_ingest_rejects_sub_unity_loss(tmp_path):
    """A negative-dB loss is the reciprocal convention: refused, not fixed."""
    path = tmp_path / "neg_loss.csv"
    path.write_text(HEADER + "5.347,20,10,18,-1.8,3.6\n")
    with pytest.raises(ValueError, match="loss"):
        ingest_noise_csv(path)
