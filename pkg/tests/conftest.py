"""Shared fixtures: the two benchmark devices and their steady states."""

from __future__ import annotations

import math

import pytest

from paramp import (DeviceParams, ModelVariant, derive_params,
                    integrate_to_steady_state, make_drive)

TWO_PI = 2.0 * math.pi


def ghz(value: float) -> float:
    return TWO_PI * 1e9 * value


@pytest.fixture(scope="session")
def iejpa_dev() -> DeviceParams:
    """The impedance-engineered device: 6.5 GHz JPA behind the transformer."""
    return DeviceParams(omega_j=ghz(6.5), omega_t_eff=ghz(6.218),
                        l_j=0.37e-9, l_t=1.9e-9, m_junctions=3,
                        r_env=50.0, omega_p=ghz(5.347))


@pytest.fixture(scope="session")
def iejpa_derived(iejpa_dev):
    return derive_params(iejpa_dev)


@pytest.fixture(scope="session")
def bare_dev() -> DeviceParams:
    """The unengineered benchmark JPA coupled straight to the line."""
    return DeviceParams(omega_j=ghz(7.05), omega_t_eff=ghz(6.218),
                        l_j=0.323e-9, l_t=1.9e-9, m_junctions=3,
                        r_env=50.0, omega_p=ghz(5.347))


@pytest.fixture(scope="session")
def bare_derived(bare_dev):
    return derive_params(bare_dev)


@pytest.fixture(scope="session")
def full_report_88(iejpa_dev, iejpa_derived):
    """Full-sine steady state at the −88 dBm operating point."""
    drive = make_drive(-88.0, iejpa_dev.omega_p)
    report = integrate_to_steady_state(iejpa_dev, iejpa_derived, drive,
                                       ModelVariant.FULL_SINE_IEJPA)
    assert report.converged
    return report
