"""Small-signal scattering around a converged pump steady state.

Linearizing the junction sine terms around the classical pump orbit couples
signal fluctuations at ω_p + Δ to idler fluctuations at ω_p − Δ.  In the
pump frame the fluctuation vector

    v = (δa_T(Δ), δa_J(Δ), δa_T†(−Δ), δa_J†(−Δ))

obeys A(Δ)·v = −input_map·(a_in(Δ), a_in†(−Δ)) with A(Δ) = iΔ·I + D, where
D is the Δ-independent drift matrix assembled from the pump-dressed Bessel
factors: each junction contributes J₀(A) on the diagonal blocks (the pump
softens the participating inductance) and J₂(A)·e^{2iφ} on the
anti-diagonal blocks (the pump mediates signal–idler conversion).  Rows 3–4
are generated mechanically as the Hermitian conjugates of rows 1–2 with
Δ → −Δ, never hand-derived, so a transcription slip in the analytic rows
shows up as a violation of the symplectic identity rather than a silent
sign error.

Input–output theory at the coupled port gives the reflection coefficients
s_ss = √κ·v₁/a_in − 1 (signal → signal) and s_si = √κ·v₁/a_in†
(idler → signal).  A lossless phase-preserving amplifier satisfies
|s_ss|² − |s_si|² = 1 exactly; the residual of that identity is attached to
every solve as a health check of the linearization and the linear algebra.

The bare-JPA variant has no transformer: the system collapses to 2×2 in
(δa_J(Δ), δa_J†(−Δ)) with the line coupling κ_J on the JPA itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import CODATA, DeviceParams, DerivedParams, PhysicalConstants, \
    PumpDrive, bare_jpa_linewidth
from .pump import ConvergenceError, JunctionDrive, ModelVariant, PumpState, \
    SteadyStateReport, integrate_to_steady_state, junction_drives

#: condition number of A(Δ) above which a solve is flagged as near-threshold
NEAR_THRESHOLD_COND = 1e3

#: reciprocal condition number below which A(Δ) is treated as singular
SINGULAR_RCOND = 1e3 * np.finfo(float).eps


class ThresholdError(RuntimeError):
    """A(Δ) is numerically singular: the pump sits on a parametric threshold.

    Carries the offending detuning (rad/s) as the ``delta`` attribute.
    """

    def __init__(self, delta: float, cond: float):
        super().__init__(
            f"fluctuation matrix is singular at delta = {delta:.6e} rad/s "
            f"(cond = {cond:.3e}); the pump is at a parametric threshold")
        self.delta = delta
        self.cond = cond


@dataclass(frozen=True, eq=False)
class FluctuationSystem:
    """Linear response system at one detuning Δ from the pump.

    ``matrix`` is A(Δ) acting on v = (a_T(Δ), a_J(Δ), a_T†(−Δ), a_J†(−Δ))
    (the two a_J rows alone for the bare variant); ``input_map[k]`` is the
    coupling of the input operator matching row k's dagger character —
    a_in(Δ) into undaggered rows, a_in†(−Δ) into daggered ones — nonzero
    only on the port-coupled mode.
    """

    delta: float
    matrix: np.ndarray
    input_map: np.ndarray
    kappa: float            # linewidth of the port-coupled mode, 1/s

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SParams:
    """Signal and idler reflection coefficients at one detuning."""

    s_ss: complex
    s_si: complex
    symplectic_residual: float
    threshold_flag: bool


@dataclass(frozen=True, eq=False)
class GainProfile:
    """Scattering results over a detuning grid, column-wise.

    One entry per grid point, sorted by delta: signal_freq = ω_p + Δ,
    gain_db = 10·log₁₀|s_ss|².  Entries where the solve hit a parametric
    threshold are NaN with the threshold flag set.
    """

    delta: np.ndarray                 # rad/s
    signal_freq: np.ndarray           # rad/s
    gain_db: np.ndarray
    s_ss: np.ndarray
    s_si: np.ndarray
    symplectic_residual: np.ndarray
    threshold_flag: np.ndarray        # bool


@dataclass(frozen=True)
class BandwidthMetrics:
    """Peak gain and 3 dB bandwidth extracted from a profile.

    ``bw_3db`` is None when either 3 dB crossing falls outside the grid (or
    inside a threshold gap): the bandwidth is then undefined rather than
    clamped to the grid span.
    """

    peak_gain_db: float
    center: float            # rad/s
    bw_3db: float | None     # rad/s


def _drift_matrix(state: PumpState, dev: DeviceParams, derived: DerivedParams,
                  model: ModelVariant, consts: PhysicalConstants) -> np.ndarray:
    """Δ-independent drift matrix D around a pump state."""
    d = derived
    drv = junction_drives(state, d, dev.m_junctions)
    ej = d.e_j / consts.hbar
    et = d.e_t / consts.hbar
    j0j = model.jpa_bessel(0, drv.a_jpa)
    j2j = model.jpa_bessel(2, drv.a_jpa)
    ph2j = np.exp(2j * drv.phi_jpa)

    if not model.has_transformer:
        kappa_j = bare_jpa_linewidth(dev, d)
        m = np.empty((2, 2), dtype=complex)
        m[0, 0] = (1j * (dev.omega_p - dev.omega_j / 2.0) - kappa_j / 2.0
                   - 1j * ej * d.c2 ** 2 * j0j)
        m[0, 1] = 1j * ej * d.c2 ** 2 * j2j * ph2j
        m[1, 0] = np.conj(m[0, 1])
        m[1, 1] = np.conj(m[0, 0])
        return m

    j0e = model.chain_bessel(0, drv.a_eff)
    j2e = model.chain_bessel(2, drv.a_eff)
    ph2e = np.exp(2j * drv.phi_eff)

    m = np.empty((4, 4), dtype=complex)
    m[0, 0] = (1j * (dev.omega_p - dev.omega_t_eff / 2.0) - d.kappa / 2.0
               - 1j * et * d.c1 ** 2 * j0e)
    m[0, 1] = 1j * et * d.c1 * d.c2 * j0e
    m[0, 2] = 1j * et * d.c1 ** 2 * j2e * ph2e
    m[0, 3] = -1j * et * d.c1 * d.c2 * j2e * ph2e
    m[1, 0] = 1j * et * d.c1 * d.c2 * j0e
    m[1, 1] = (1j * (dev.omega_p - dev.omega_j / 2.0)
               - 1j * ej * d.c2 ** 2 * j0j
               - 1j * et * d.c2 ** 2 * j0e)
    m[1, 2] = -1j * et * d.c1 * d.c2 * j2e * ph2e
    m[1, 3] = 1j * ej * d.c2 ** 2 * j2j * ph2j + 1j * et * d.c2 ** 2 * j2e * ph2e
    m[2:, 2:] = np.conj(m[:2, :2])
    m[2:, :2] = np.conj(m[:2, 2:])
    return m


def _port_couplings(dev: DeviceParams, derived: DerivedParams,
                    model: ModelVariant) -> tuple[float, np.ndarray]:
    """(κ of the port-coupled mode, input_map vector) for a variant."""
    if model.has_transformer:
        kappa = derived.kappa
        input_map = np.zeros(4, dtype=complex)
        input_map[0] = input_map[2] = np.sqrt(kappa)
    else:
        kappa = bare_jpa_linewidth(dev, derived)
        input_map = np.full(2, np.sqrt(kappa), dtype=complex)
    return kappa, input_map


def _as_converged_state(pump: PumpState | SteadyStateReport) -> PumpState:
    if isinstance(pump, SteadyStateReport):
        if not pump.converged:
            raise ConvergenceError(
                "pump integration did not converge (residual "
                f"{pump.residual:.3e}); refusing to linearize around it")
        return pump.state
    return pump


def build_fluctuation_system(delta: float, pump: PumpState | SteadyStateReport,
                             derived: DerivedParams, dev: DeviceParams,
                             model: ModelVariant,
                             consts: PhysicalConstants = CODATA) -> FluctuationSystem:
    """Assemble A(Δ) and the input couplings around a pump working point.

    ``pump`` is normally the SteadyStateReport from
    :func:`paramp.pump.integrate_to_steady_state`; a non-converged report
    is rejected.  Passing a bare PumpState asserts that the caller has
    already verified it is a steady state.
    """
    state = _as_converged_state(pump)
    drift = _drift_matrix(state, dev, derived, model, consts)
    kappa, input_map = _port_couplings(dev, derived, model)
    matrix = 1j * delta * np.eye(drift.shape[0]) + drift
    return FluctuationSystem(delta=float(delta), matrix=matrix,
                             input_map=input_map, kappa=kappa)


def solve_scattering(system: FluctuationSystem) -> SParams:
    """Solve one fluctuation system for the port reflection coefficients.

    Raises ThresholdError when A(Δ) is numerically singular (parametric
    oscillation threshold); sets the near-threshold flag when the condition
    number exceeds NEAR_THRESHOLD_COND.
    """
    a = system.matrix
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or 1.0 / cond < SINGULAR_RCOND:
        raise ThresholdError(system.delta, cond)
    n = system.size
    # response to a unit a_in(Δ) (column 0) and a unit a_in†(−Δ) (column 1)
    rhs = np.zeros((n, 2), dtype=complex)
    rhs[0, 0] = -system.input_map[0]
    rhs[n // 2, 1] = -system.input_map[n // 2]
    sol = np.linalg.solve(a, rhs)
    sqrt_k = np.sqrt(system.kappa)
    s_ss = sqrt_k * sol[0, 0] - 1.0
    s_si = sqrt_k * sol[0, 1]
    residual = abs(abs(s_ss) ** 2 - abs(s_si) ** 2 - 1.0)
    return SParams(s_ss=complex(s_ss), s_si=complex(s_si),
                   symplectic_residual=float(residual),
                   threshold_flag=bool(cond > NEAR_THRESHOLD_COND))


def gain_profile(dev: DeviceParams, derived: DerivedParams, drive: PumpDrive,
                 model: ModelVariant, grid: np.ndarray,
                 consts: PhysicalConstants = CODATA,
                 report: SteadyStateReport | None = None,
                 tol: float | None = None,
                 max_model_time: float | None = None,
                 rtol: float = 1e-10) -> GainProfile:
    """Gain profile over a detuning grid: one pump integration, per-Δ solves.

    The pump steady state is integrated once (or taken from ``report`` if
    the caller already has one for the same working point) and the
    fluctuation system is then solved independently at every grid point.
    Non-convergence of the pump propagates as ConvergenceError.  A
    ThresholdError at an individual grid point is recorded as a NaN gap
    entry with the threshold flag set instead of aborting the sweep, so a
    profile that clips a parametric threshold still reports the rest of
    the band.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("detuning grid is empty")
    if not np.all(np.isfinite(grid)):
        raise ValueError("detuning grid contains non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    if np.any(grid == 0.0):
        raise ValueError("detuning grid must exclude 0 "
                         "(degenerate signal/idler point)")
    if report is None:
        report = integrate_to_steady_state(dev, derived, drive, model,
                                           tol=tol, max_model_time=max_model_time,
                                           rtol=rtol, consts=consts)
    state = _as_converged_state(report)
    drift = _drift_matrix(state, dev, derived, model, consts)
    kappa, input_map = _port_couplings(dev, derived, model)
    eye = np.eye(drift.shape[0])

    n = grid.size
    s_ss = np.empty(n, dtype=complex)
    s_si = np.empty(n, dtype=complex)
    residual = np.empty(n, dtype=float)
    flags = np.zeros(n, dtype=bool)
    for k, delta in enumerate(grid):
        system = FluctuationSystem(delta=float(delta),
                                   matrix=1j * delta * eye + drift,
                                   input_map=input_map, kappa=kappa)
        try:
            sp = solve_scattering(system)
        except ThresholdError:
            s_ss[k] = s_si[k] = complex(np.nan, np.nan)
            residual[k] = np.nan
            flags[k] = True
            continue
        s_ss[k] = sp.s_ss
        s_si[k] = sp.s_si
        residual[k] = sp.symplectic_residual
        flags[k] = sp.threshold_flag
    with np.errstate(divide="ignore", invalid="ignore"):
        gain_db = 10.0 * np.log10(np.abs(s_ss) ** 2)
    return GainProfile(delta=grid, signal_freq=dev.omega_p + grid,
                       gain_db=gain_db, s_ss=s_ss, s_si=s_si,
                       symplectic_residual=residual, threshold_flag=flags)


def default_grid(span: float, points: int) -> np.ndarray:
    """Detuning grid of ``points`` samples across ``span``, avoiding Δ = 0.

    The grid is uniform with step h = span/(points − 1), centred on the
    pump.  When the centred grid would contain Δ = 0 exactly (odd point
    count) every sample is shifted by +h/2: signal and idler then never
    coincide, and the degenerate phase-sensitive point is never sampled.
    """
    if points < 2:
        raise ValueError(f"points must be at least 2, got {points}")
    if not span > 0:
        raise ValueError(f"span must be positive, got {span!r}")
    grid = np.linspace(-span / 2.0, span / 2.0, points)
    if points % 2 == 1:
        grid = grid + (span / (points - 1)) / 2.0
    return grid


def _cross_3db(deltas: np.ndarray, gain_db: np.ndarray, start: int,
               step: int, level: float) -> float | None:
    """Walk from ``start`` in direction ``step`` to the first dip below level.

    Returns the linearly interpolated crossing detuning, or None if the
    profile leaves the grid (or hits a NaN gap) while still above level.
    """
    k = start
    while True:
        k_next = k + step
        if k_next < 0 or k_next >= deltas.size:
            return None
        g = gain_db[k_next]
        if not np.isfinite(g):
            return None
        if g < level:
            frac = (gain_db[k] - level) / (gain_db[k] - g)
            return float(deltas[k] + frac * (deltas[k_next] - deltas[k]))
        k = k_next


def bandwidth_metrics(profile: GainProfile) -> BandwidthMetrics:
    """Peak gain and contiguous 3 dB bandwidth around the peak."""
    finite = np.isfinite(profile.gain_db)
    if not finite.any():
        raise ValueError("gain profile has no finite entries")
    idx = int(np.argmax(np.where(finite, profile.gain_db, -np.inf)))
    peak = float(profile.gain_db[idx])
    level = peak - 3.0
    left = _cross_3db(profile.delta, profile.gain_db, idx, -1, level)
    right = _cross_3db(profile.delta, profile.gain_db, idx, +1, level)
    bw = None if left is None or right is None else float(right - left)
    return BandwidthMetrics(peak_gain_db=peak,
                            center=float(profile.delta[idx]),
                            bw_3db=bw)
