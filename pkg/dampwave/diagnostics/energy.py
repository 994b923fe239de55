"""
Energy identity, bounded-variation structure and higher-order energy checks
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from dampwave.diagnostics.trace import EnergyTrace
from dampwave.dynamics.galerkin import DampingKind, ModelConfig, State, total_energy
from dampwave.errors import DegenerateTraceError
from dampwave.spectral.domain import SpectralField, lp_norm, to_physical

GRONWALL_FLOOR = 1e-12


def energy_identity_residual(trace: EnergyTrace) -> float:
    """max_i |E(t_i) - E(0) + ∫₀^{t_i} E‖u_t‖² ds|, the integral taken from the trace"""
    residual = trace.energy - trace.energy[0] + trace.diss_integral
    return float(np.max(np.abs(residual)))


@dataclass(frozen=True)
class VariationReport:
    total_variation: float
    energy_drop: float
    max_increase: float
    sup_energy: float

    @property
    def defect(self) -> float:
        """TV - (E(0) - E(T)); zero exactly when E is monotone"""
        return self.total_variation - self.energy_drop


def energy_total_variation(trace: EnergyTrace) -> VariationReport:
    increments = np.diff(trace.energy)
    return VariationReport(
        total_variation=float(np.sum(np.abs(increments))),
        energy_drop=float(trace.energy[0] - trace.energy[-1]),
        max_increase=float(np.max(increments, initial=0.0)),
        sup_energy=float(np.max(trace.energy)),
    )


@dataclass(frozen=True)
class GronwallReport:
    """
    K fitted so that E₁(t) <= E₁(0) exp(K ∫₀ᵗ ‖u‖₁₂⁴ ds) holds on the trace.
    K <= 0 means E₁ never exceeded E₁(0), where the bound is trivially satisfied.
    """
    constant: float
    max_violation: float
    samples_used: int

    @property
    def trivially_satisfied(self) -> bool:
        return self.constant <= 0.0


def gronwall_check(trace: EnergyTrace, floor: float = GRONWALL_FLOOR) -> GronwallReport:
    e1_0 = float(trace.higher_energy[0])
    if not e1_0 > 0:
        raise DegenerateTraceError("Gronwall check needs E1(0) > 0")
    integral = trace.cumulative_l12_4
    used = integral > floor
    if not np.any(used):
        return GronwallReport(0.0, 0.0, 0)
    logs = np.log(trace.higher_energy[used] / e1_0)
    constant = float(np.max(logs / integral[used]))
    bound = e1_0 * np.exp(constant * integral[used])
    violation = float(np.max(trace.higher_energy[used] - bound))
    return GronwallReport(constant, max(violation, 0.0), int(np.count_nonzero(used)))


@dataclass(frozen=True)
class RegularRateReport:
    """c in dE₁/dt <= c E₀^{1/2} E₁^{5/2}, and max_t E₁(t)/E₁(0)"""
    rate_constant: float
    persistence_ratio: float


def regular_energy_rate_check(trace: EnergyTrace, energy0: float) -> RegularRateReport:
    if len(trace) < 2:
        raise DegenerateTraceError("rate check needs at least two samples")
    e1 = trace.higher_energy
    if not (energy0 > 0 and e1[0] > 0):
        raise DegenerateTraceError("rate check needs E0 > 0 and E1(0) > 0")
    slopes = np.maximum(np.diff(e1) / np.diff(trace.times), 0.0)
    scale = math.sqrt(energy0) * e1[:-1] ** 2.5
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(scale > 0, slopes / scale, 0.0)
    return RegularRateReport(float(np.max(ratios)), float(np.max(e1) / e1[0]))


@dataclass(frozen=True)
class MultiplierIdentity:
    """
    Both sides of the identity obtained by testing the equation with u
    over [t, t+1]:

        ∫(‖∇u‖² + ‖u‖₆⁶) = ∫‖u_t‖² - [⟨u_t, u⟩] - ∫E⟨u_t, u⟩
    """
    start: float
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs


def multiplier_identity_residual(
    snapshots: Sequence[State],
    config: ModelConfig,
    start: float,
    length: float = 1.0,
) -> MultiplierIdentity:
    """Evaluate the identity on state snapshots by trapezoid quadrature in time"""
    window = [s for s in snapshots if start - 1e-12 <= s.t <= start + length + 1e-12]
    if len(window) < 2:
        raise DegenerateTraceError(f"no snapshots cover [{start}, {start + length}]")
    times = np.array([s.t for s in window])
    grad, sextic, kinetic, cross, weighted = [], [], [], [], []
    for s in window:
        sixth = lp_norm(s.u, 6, config.padding) ** 6 if config.quintic else 0.0
        ut_u = s.v.inner(s.u)
        grad.append(s.u.gradient_norm_sq())
        sextic.append(sixth)
        kinetic.append(s.v.l2_norm_sq())
        cross.append(ut_u)
        weighted.append(_damping_coefficient(s, config) * ut_u)
    lhs = trapezoid(np.add(grad, sextic), times)
    rhs = trapezoid(kinetic, times) - (cross[-1] - cross[0]) - trapezoid(weighted, times)
    return MultiplierIdentity(start, float(lhs), float(rhs))


def _damping_coefficient(state: State, config: ModelConfig) -> float:
    if config.damping is DampingKind.NONE:
        return 0.0
    if config.damping is DampingKind.CONSTANT:
        return config.damping_constant
    return total_energy(state, config)


@dataclass(frozen=True)
class QuadratureEstimate:
    l10_relative_change: float
    l12_relative_change: float


def quadrature_error_estimate(u: SpectralField, base: int = 3, refined: int = 4) -> QuadratureEstimate:
    """Relative change of ‖u‖₁₀ and ‖u‖₁₂ between two paddings"""
    coarse, fine = to_physical(u, base), to_physical(u, refined)

    def change(p: int) -> float:
        a, b = lp_norm(coarse, p), lp_norm(fine, p)
        return abs(a - b) / b if b > 0 else 0.0

    return QuadratureEstimate(change(10), change(12))


def first_increase(trace: EnergyTrace, slack: float = 1e-12) -> Optional[int]:
    """Index of the first sample where E rose by more than slack·E(0)"""
    rises = np.nonzero(np.diff(trace.energy) > slack * max(trace.energy[0], 1e-300))[0]
    return int(rises[0]) + 1 if rises.size else None
