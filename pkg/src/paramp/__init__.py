"""paramp: gain and noise modeling of impedance-engineered Josephson
parametric amplifiers from first-principles circuit parameters.

The package computes the classical pump steady state of a JPA coupled to a
series-LC impedance transformer, linearizes the junction nonlinearities
around it, and solves the resulting input–output scattering problem for
small-signal gain profiles under three nonlinearity models (full sine,
quartic truncation, and the bare JPA without the transformer).  A separate
Friis-formula estimator turns measured pump-on/pump-off SNR data into
added-noise photon numbers.

Typical use::

    from paramp import (DeviceParams, derive_params, make_drive,
                        ModelVariant, integrate_to_steady_state,
                        gain_profile, default_grid, bandwidth_metrics)

    dev = DeviceParams(omega_j=2*pi*6.5e9, ...)
    der = derive_params(dev)
    drive = make_drive(-88.0, dev.omega_p)
    profile = gain_profile(dev, der, drive, ModelVariant.FULL_SINE_IEJPA,
                           default_grid(2*pi*1e9, 667))
"""

from .noise import (NoiseEstimate, NoiseRecord, SQL_PHOTONS, ingest_noise_csv,
                    n_add)
from .params import (CODATA, DerivedParams, DeviceParams, PhysicalConstants,
                     PumpDrive, bare_jpa_linewidth, dbm_to_input_amplitude,
                     derive_params, make_drive)
from .pump import (ConvergenceError, JunctionDrive, ModelVariant, PumpState,
                   SteadyStateReport, integrate_to_steady_state,
                   junction_drives, pump_derivative)
from .scattering import (BandwidthMetrics, FluctuationSystem, GainProfile,
                         SParams, ThresholdError, bandwidth_metrics,
                         build_fluctuation_system, default_grid, gain_profile,
                         solve_scattering)
from .specfun import bessel_j, bessel_j_quartic

__version__ = "0.1.0"

__all__ = [
    "BandwidthMetrics", "CODATA", "ConvergenceError", "DerivedParams",
    "DeviceParams", "FluctuationSystem", "GainProfile", "JunctionDrive",
    "ModelVariant", "NoiseEstimate", "NoiseRecord", "PhysicalConstants",
    "PumpDrive", "PumpState", "SParams", "SQL_PHOTONS", "SteadyStateReport",
    "ThresholdError", "bandwidth_metrics", "bare_jpa_linewidth", "bessel_j",
    "bessel_j_quartic", "build_fluctuation_system", "dbm_to_input_amplitude",
    "default_grid", "derive_params", "gain_profile", "ingest_noise_csv",
    "integrate_to_steady_state", "junction_drives", "make_drive", "n_add",
    "pump_derivative", "solve_scattering",
]
