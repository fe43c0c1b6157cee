"""Physical constants, device parameters, and derived circuit quantities.

Every symbol used by the dynamics modules is defined here.  Internal unit
system is SI throughout (rad/s, H, J, Ω); the CLI converts GHz/nH/dBm at the
boundary.

The two consistency identities

    e_j * c2**2 / hbar == omega_j / 2
    e_t * c1**2 / hbar == omega_t_eff / 2

hold exactly by construction and are what ties the Josephson energies, the
mode impedances, and the zero-point phase scales together.  They are relied
on throughout the dynamics (the junction sine terms must reproduce the bare
resonance frequencies in the small-amplitude limit) and are guarded by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants used by the model.

    Attributes
    ----------
    hbar : float
        Reduced Planck constant in J*s.
    phi0 : float
        Magnetic flux quantum h/2e in Wb.
    kb : float
        Boltzmann constant in J/K.
    """

    hbar: float = 1.054571817e-34
    phi0: float = 2.067833848e-15
    kb: float = 1.380649e-23


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class DeviceParams:
    """Raw circuit parameters of the device.

    Attributes
    ----------
    omega_j : float
        JPA resonance angular frequency in rad/s.
    omega_t_eff : float
        Effective transformer angular frequency in rad/s (environment
        loading already folded in; this is a direct input, not computed
        from capacitances).
    l_j : float
        Total linearized JPA inductance in H.
    l_t : float
        Total linearized transformer inductance in H.
    m_junctions : int
        Number of junctions in the transformer array.
    r_env : float
        Environment (line) impedance in Ω.
    omega_p : float
        Pump angular frequency in rad/s.
    """

    omega_j: float
    omega_t_eff: float
    l_j: float
    l_t: float
    m_junctions: int
    r_env: float
    omega_p: float

    def __post_init__(self):
        for name in ("omega_j", "omega_t_eff", "l_j", "l_t", "r_env", "omega_p"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if not (isinstance(self.m_junctions, int) and self.m_junctions >= 1):
            raise ValueError(f"m_junctions must be an integer >= 1, got {self.m_junctions!r}")


@dataclass(frozen=True)
class DerivedParams:
    """Circuit quantities derived from :class:`DeviceParams`.

    Attributes
    ----------
    e_j : float
        JPA Josephson energy in J, phi0**2 / (4 pi**2 l_j).
    e_t : float
        Per-junction transformer Josephson energy scale in J,
        phi0**2 / (4 pi**2 l_t).  The physical per-junction energy of the
        m-junction chain is m * e_t; the chain's linearized inductance is
        the quoted l_t.
    z_j : float
        JPA mode impedance omega_j * l_j in Ω.
    z_t : float
        Transformer mode impedance omega_t_eff * l_t in Ω.
    c1 : float
        Transformer zero-point phase scale (dimensionless).
    c2 : float
        JPA zero-point phase scale (dimensionless).
    kappa : float
        Transformer linewidth r_env * omega_t_eff / z_t in rad/s.
    """

    e_j: float
    e_t: float
    z_j: float
    z_t: float
    c1: float
    c2: float
    kappa: float


@dataclass(frozen=True)
class PumpDrive:
    """Pump power and the corresponding input amplitude.

    alpha_in is real nonnegative by phase convention (the pump phase is the
    global phase reference; gain is invariant under it).
    """

    power_dbm: float
    alpha_in: float

    def __post_init__(self):
        if not math.isfinite(self.alpha_in) or self.alpha_in < 0:
            raise ValueError(f"alpha_in must be finite and >= 0, got {self.alpha_in!r}")


def derive_params(dev: DeviceParams, consts: PhysicalConstants = CODATA) -> DerivedParams:
    """Compute all derived circuit quantities from raw device parameters.

    Parameters
    ----------
    dev : DeviceParams
        Raw circuit inputs (validated on construction).
    consts : PhysicalConstants, optional
        Physical constants; defaults to CODATA values.

    Returns
    -------
    DerivedParams
        Josephson energies, mode impedances, zero-point phase scales, and
        the transformer linewidth.

    Notes
    -----
    c1 = (2π/φ₀)·sqrt(ħ·z_t/2) and c2 = (2π/φ₀)·sqrt(ħ·z_j/2) are the
    zero-point phase fluctuation scales across the transformer junction
    chain and the JPA junction.  Together with e_j, e_t they satisfy
    e_j·c2²/ħ = omega_j/2 and e_t·c1²/ħ = omega_t_eff/2 exactly.
    """
    e_j = consts.phi0**2 / (4 * math.pi**2 * dev.l_j)
    e_t = consts.phi0**2 / (4 * math.pi**2 * dev.l_t)
    z_j = dev.omega_j * dev.l_j
    z_t = dev.omega_t_eff * dev.l_t
    c1 = 2 * math.pi / consts.phi0 * math.sqrt(consts.hbar * z_t / 2)
    c2 = 2 * math.pi / consts.phi0 * math.sqrt(consts.hbar * z_j / 2)
    kappa = dev.r_env * dev.omega_t_eff / z_t
    return DerivedParams(e_j=e_j, e_t=e_t, z_j=z_j, z_t=z_t, c1=c1, c2=c2, kappa=kappa)


def dbm_to_input_amplitude(power_dbm: float, omega_p: float,
                           consts: PhysicalConstants = CODATA) -> float:
    """Convert pump power in dBm to the input amplitude α_in.

    α_in = sqrt(P_watts / (ħ·omega_p)) with P_watts = 10**((power_dbm − 30)/10),
    i.e. the square root of the incident photon flux, in units of
    sqrt(photons/s).  Monotone increasing in power_dbm.

    Parameters
    ----------
    power_dbm : float
        Pump power at the device input in dBm.  −inf is allowed and maps
        to zero amplitude.
    omega_p : float
        Pump angular frequency in rad/s.
    consts : PhysicalConstants, optional
    """
    if math.isnan(power_dbm) or power_dbm == math.inf:
        raise ValueError(f"power_dbm must not be NaN or +inf, got {power_dbm!r}")
    if not (math.isfinite(omega_p) and omega_p > 0):
        raise ValueError(f"omega_p must be positive and finite, got {omega_p!r}")
    p_watts = 10.0 ** ((power_dbm - 30.0) / 10.0)
    return math.sqrt(p_watts / (consts.hbar * omega_p))


def make_drive(power_dbm: float, omega_p: float,
               consts: PhysicalConstants = CODATA) -> PumpDrive:
    """Build a :class:`PumpDrive` from a power in dBm."""
    return PumpDrive(power_dbm=power_dbm,
                     alpha_in=dbm_to_input_amplitude(power_dbm, omega_p, consts))


def bare_jpa_linewidth(dev: DeviceParams, derived: DerivedParams) -> float:
    """Linewidth of the JPA when coupled directly to the line (no transformer).

    Removing the transformer leaves the JPA's parallel LC shunted by the
    line impedance R, so the energy decay rate is 1/(R·C_J).  With
    C_J = 1/(omega_j²·l_j) this is omega_j·z_j/r_env.

    Returns
    -------
    float
        κ_J in rad/s.
    """
    return dev.omega_j * derived.z_j / dev.r_env
