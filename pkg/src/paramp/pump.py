"""Classical pump dynamics: equations of motion and steady-state integration.

The device is driven hard at the pump frequency ω_p; in the frame rotating at
ω_p the intracavity pump settles to complex fixed-point amplitudes
(α_T, α_J) for the transformer and JPA modes.  All downstream small-signal
quantities are evaluated around that fixed point, so everything here is about
finding it reliably: integrate from empty cavities (the physically prepared
branch) until the derivative norm stays below tolerance for a trailing
window, then optionally polish with a Newton step.

Junction-chain bookkeeping
--------------------------
The transformer's array of ``m`` identical junctions has total linearized
inductance l_t, so the per-junction Josephson energy is m·e_t while each
junction carries 1/m of the total phase drop.  The chain therefore enters
the equations of motion as m·e_t·J₁(A_eff) with
A_eff·e^{iφ_eff} = 2(c₁α_T − c₂α_J)/m.  In the small-amplitude limit
J₁(A) → A/2 this term contributes exactly ω_t_eff/2 to the transformer mode
frequency (via e_t·c₁²/ħ = ω_t_eff/2), which combines with the explicit
ω_t_eff/2 detuning term to give the full linear resonance — the bookkeeping
the consistency identities in :mod:`paramp.params` guarantee.  The JPA's
single junction enters as e_j·J₁(A_jpa) with A_jpa·e^{iφ_jpa} = 2c₂α_J and
closes its frequency budget the same way.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from .params import (CODATA, DeviceParams, DerivedParams, PhysicalConstants,
                     PumpDrive, bare_jpa_linewidth)
from .specfun import bessel_j, bessel_j_quartic


class ConvergenceError(RuntimeError):
    """A computation required a converged pump steady state and had none.

    Steady-state integration itself reports non-convergence in-band through
    SteadyStateReport.converged so sweeps can record it; this error is
    raised by downstream consumers for whom a drifting pump state is
    meaningless.
    """


class ModelVariant(enum.Enum):
    """Nonlinearity model used for both pump and fluctuation dynamics.

    FULL_SINE_IEJPA
        Exact J₀/J₁/J₂ for both junctions, transformer present.
    QUARTIC_IEJPA
        JPA junction truncated to quartic (Kerr) order, transformer junction
        treated linearly (J₀ → 1, J₁ → A/2, J₂ → 0).
    BARE_JPA_FULL_SINE
        Transformer removed; the JPA couples directly to the line with
        linewidth κ_J = 1/(R·C_J) and keeps its exact sine nonlinearity.
    LINEARIZED
        Every junction treated linearly (J₁ → A/2, J₂ → 0).  Diagnostic
        variant: the pump equations become an exactly solvable 2×2 linear
        system, used as an integration oracle.  Not exposed on the CLI.
    """

    FULL_SINE_IEJPA = "full"
    QUARTIC_IEJPA = "quartic"
    BARE_JPA_FULL_SINE = "bare"
    LINEARIZED = "linear"

    @property
    def has_transformer(self) -> bool:
        return self is not ModelVariant.BARE_JPA_FULL_SINE

    def chain_bessel(self, n: int, x: float) -> float:
        """J_n replacement for the transformer junction chain."""
        if self is ModelVariant.FULL_SINE_IEJPA or self is ModelVariant.BARE_JPA_FULL_SINE:
            return bessel_j(n, x)
        # quartic and linearized variants: linear transformer junction
        return (1.0, x / 2.0, 0.0)[n]

    def jpa_bessel(self, n: int, x: float) -> float:
        """J_n replacement for the JPA junction."""
        if self is ModelVariant.QUARTIC_IEJPA:
            return bessel_j_quartic(n, x)
        if self is ModelVariant.LINEARIZED:
            return (1.0, x / 2.0, 0.0)[n]
        return bessel_j(n, x)


@dataclass(frozen=True)
class PumpState:
    """Complex pump amplitudes in the frame rotating at ω_p."""

    alpha_t: complex
    alpha_j: complex

    def __post_init__(self):
        if not (cmath.isfinite(self.alpha_t) and cmath.isfinite(self.alpha_j)):
            raise ValueError("pump amplitudes must be finite")


@dataclass(frozen=True)
class JunctionDrive:
    """Pump amplitude and phase across each junction.

    Satisfies a_eff·e^{i·phi_eff} = 2(c₁·alpha_t − c₂·alpha_j)/m and
    a_jpa·e^{i·phi_jpa} = 2·c₂·alpha_j with nonnegative amplitudes.
    """

    a_eff: float
    phi_eff: float
    a_jpa: float
    phi_jpa: float


@dataclass(frozen=True)
class SteadyStateReport:
    """Outcome of a steady-state integration."""

    state: PumpState
    residual: float
    elapsed_model_time: float
    converged: bool


def junction_drives(state: PumpState, derived: DerivedParams, m: int) -> JunctionDrive:
    """Decompose a pump state into junction drive amplitudes and phases.

    Zero amplitudes get phase 0 by convention.
    """
    u_eff = 2.0 * (derived.c1 * state.alpha_t - derived.c2 * state.alpha_j) / m
    u_jpa = 2.0 * derived.c2 * state.alpha_j
    return JunctionDrive(
        a_eff=abs(u_eff),
        phi_eff=cmath.phase(u_eff) if u_eff != 0 else 0.0,
        a_jpa=abs(u_jpa),
        phi_jpa=cmath.phase(u_jpa) if u_jpa != 0 else 0.0,
    )


class _Rates:
    """Precomputed rate coefficients for one (device, variant) combination.

    Avoids re-deriving scalar constants on every right-hand-side call inside
    the integrator.
    """

    __slots__ = ("dev", "derived", "model", "ej_rate", "et_rate", "kappa_used",
                 "sqrt_kappa", "det_t", "det_j", "m")

    def __init__(self, dev: DeviceParams, derived: DerivedParams,
                 model: ModelVariant, consts: PhysicalConstants):
        self.dev = dev
        self.derived = derived
        self.model = model
        self.m = dev.m_junctions
        self.ej_rate = derived.e_j / consts.hbar
        self.et_rate = derived.e_t / consts.hbar
        if model.has_transformer:
            self.kappa_used = derived.kappa
        else:
            self.kappa_used = bare_jpa_linewidth(dev, derived)
        self.sqrt_kappa = math.sqrt(self.kappa_used)
        # explicit detuning terms i(ω_p − Ω/2); in the bare variant the JPA
        # row also carries the line damping
        self.det_t = 1j * (dev.omega_p - dev.omega_t_eff / 2.0) - derived.kappa / 2.0
        self.det_j = 1j * (dev.omega_p - dev.omega_j / 2.0)
        if not model.has_transformer:
            self.det_j = self.det_j - self.kappa_used / 2.0

    def rhs(self, alpha_t: complex, alpha_j: complex,
            alpha_in: float) -> tuple[complex, complex]:
        d = self.derived
        u_jpa = 2.0 * d.c2 * alpha_j
        a_jpa = abs(u_jpa)
        ph_jpa = u_jpa / a_jpa if a_jpa != 0.0 else 1.0 + 0j
        jpa_term = self.ej_rate * self.model.jpa_bessel(1, a_jpa) * ph_jpa

        if not self.model.has_transformer:
            d_aj = (self.det_j * alpha_j + self.sqrt_kappa * alpha_in
                    - 1j * d.c2 * jpa_term)
            return 0.0 + 0j, d_aj

        u_eff = 2.0 * (d.c1 * alpha_t - d.c2 * alpha_j) / self.m
        a_eff = abs(u_eff)
        ph_eff = u_eff / a_eff if a_eff != 0.0 else 1.0 + 0j
        # m junctions, each with energy m·e_t and phase drop A_eff
        chain_term = self.m * self.et_rate * self.model.chain_bessel(1, a_eff) * ph_eff
        d_at = (self.det_t * alpha_t + self.sqrt_kappa * alpha_in
                - 1j * d.c1 * chain_term)
        d_aj = (self.det_j * alpha_j + 1j * d.c2 * chain_term
                - 1j * d.c2 * jpa_term)
        return d_at, d_aj


def pump_derivative(state: PumpState, derived: DerivedParams, dev: DeviceParams,
                    drive: PumpDrive, model: ModelVariant,
                    consts: PhysicalConstants = CODATA) -> tuple[complex, complex]:
    """Evaluate the pump equations of motion at a given state.

    Returns
    -------
    (complex, complex)
        (dα_T/dt, dα_J/dt) in 1/s.  For the bare-JPA variant the
        transformer derivative is identically zero (the mode is absent).
    """
    rates = _Rates(dev, derived, model, consts)
    return rates.rhs(state.alpha_t, state.alpha_j, drive.alpha_in)


def default_tolerance(kappa_used: float, alpha_in: float) -> float:
    """Drive-relative steady-state tolerance with a small absolute floor.

    1e-6·sqrt(κ)·α_in scales with the problem magnitude; the 1e-3 floor
    keeps the zero-drive case (residual exactly 0) classifiable.
    """
    return max(1e-6 * math.sqrt(kappa_used) * alpha_in, 1e-3)


def integrate_to_steady_state(dev: DeviceParams, derived: DerivedParams,
                              drive: PumpDrive, model: ModelVariant,
                              tol: float | None = None,
                              max_model_time: float | None = None,
                              rtol: float = 1e-10,
                              polish: bool = True,
                              consts: PhysicalConstants = CODATA,
                              trajectory_out: list | None = None) -> SteadyStateReport:
    """Integrate the pump equations from empty cavities to the steady state.

    Starting from α_T = α_J = 0, the equations are integrated with an
    adaptive explicit Runge–Kutta (4th/5th order) scheme at relative
    tolerance ``rtol``.  Convergence is declared when the derivative norm
    stays below ``tol`` for a trailing window of 10/κ of model time; the
    state is then optionally polished by a damped Newton step to tighten
    the residual.  Exceeding ``max_model_time`` yields converged = False
    with the best state found, reported in-band rather than raised so
    sweeps can record it.

    Parameters
    ----------
    tol : float, optional
        Residual norm threshold in 1/s; defaults to
        max(1e-6·sqrt(κ)·α_in, 1e-3) with κ the linewidth of the driven
        mode for the variant.
    max_model_time : float, optional
        Integration horizon in s; defaults to 1e4/κ.
    polish : bool, optional
        Attempt a Newton polish after convergence (default True).  The
        polished state is accepted only if it reduces the residual without
        moving the state appreciably.
    trajectory_out : list, optional
        If given, appended with (t, α_T, α_J) tuples at ~1/κ spacing.
    """
    if tol is not None and not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    rates = _Rates(dev, derived, model, consts)
    kappa_used = rates.kappa_used
    if tol is None:
        tol = default_tolerance(kappa_used, drive.alpha_in)
    if max_model_time is None:
        max_model_time = 1e4 / kappa_used

    def rhs_flat(t, y):
        d_at, d_aj = rates.rhs(y[0], y[1], drive.alpha_in)
        return [d_at, d_aj]

    def residual_of(y) -> float:
        d_at, d_aj = rates.rhs(y[0], y[1], drive.alpha_in)
        return math.hypot(abs(d_at), abs(d_aj))

    y = np.zeros(2, dtype=complex)
    t_now = 0.0
    res = residual_of(y)
    if trajectory_out is not None:
        trajectory_out.append((t_now, complex(y[0]), complex(y[1])))
    if res < tol:
        return SteadyStateReport(PumpState(complex(y[0]), complex(y[1])),
                                 res, 0.0, True)

    dt = 1.0 / kappa_used          # checkpoint spacing
    window = 10                    # trailing checkpoints that must sit below tol
    chunk = 20                     # checkpoints per solver call
    recent: list[float] = []
    converged = False

    while t_now < max_model_time and not converged:
        t_end = min(t_now + chunk * dt, max_model_time)
        n_eval = max(2, int(round((t_end - t_now) / dt)) + 1)
        t_eval = np.linspace(t_now, t_end, n_eval)
        # trial steps that overshoot into overflow are rejected by the
        # adaptive stepper; keep numpy quiet about them
        with np.errstate(over="ignore", invalid="ignore"):
            sol = solve_ivp(rhs_flat, (t_now, t_end), y, method="RK45",
                            rtol=rtol, atol=1e-12, t_eval=t_eval)
        if not sol.success:
            break
        for k in range(1, len(sol.t)):
            yk = sol.y[:, k]
            if trajectory_out is not None:
                trajectory_out.append((sol.t[k], complex(yk[0]), complex(yk[1])))
            recent.append(residual_of(yk))
            if len(recent) > window + 1:
                recent.pop(0)
            if len(recent) == window + 1 and max(recent) < tol:
                y = yk
                t_now = sol.t[k]
                converged = True
                break
        else:
            y = sol.y[:, -1]
            t_now = sol.t[-1]

    res = residual_of(y)
    if converged and polish:
        y_polished = _newton_polish(y, rates, drive.alpha_in)
        if y_polished is not None:
            res_polished = residual_of(y_polished)
            if res_polished < res:
                y = y_polished
                res = res_polished

    state = PumpState(complex(y[0]), complex(y[1]))
    return SteadyStateReport(state, res, t_now, converged and res < tol)


def _newton_polish(y, rates: _Rates, alpha_in: float):
    """Tighten a converged state with a root find on the real embedding.

    Returns the polished complex pair, or None if the root find failed or
    wandered away from the integrated state.
    """
    scale = 1.0 + float(np.hypot(abs(y[0]), abs(y[1])))

    def f(x):
        d_at, d_aj = rates.rhs(x[0] + 1j * x[1], x[2] + 1j * x[3], alpha_in)
        return [d_at.real, d_at.imag, d_aj.real, d_aj.imag]

    x0 = [y[0].real, y[0].imag, y[1].real, y[1].imag]
    sol = root(f, x0, method="hybr")
    if not sol.success:
        return None
    y_new = np.array([sol.x[0] + 1j * sol.x[1], sol.x[2] + 1j * sol.x[3]])
    if np.hypot(abs(y_new[0] - y[0]), abs(y_new[1] - y[1])) > 1e-4 * scale:
        return None
    return y_new
