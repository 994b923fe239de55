"""
Truncated damped critical wave equation

    u_tt - Δu + Π(u⁵) + E(t) u_t = 0,   u = 0 on ∂Ω,

on the sine basis of a box, where Π is either the sharp Galerkin projector,
a smooth spectral cutoff, or the identity on the N retained modes.

Time stepping is the symmetric Strang composition

    D(dt/2) K(dt/2) L(dt) K(dt/2) D(dt/2)

with three exact substeps: L rotates every mode of the linear wave flow,
K kicks u_t by the projected quintic with u frozen, and D integrates the
damping with u frozen.  For energy-coefficient damping the kinetic energy
K = ½‖u_t‖² obeys K' = -2K(P + K) with P the frozen potential energy,
which has a closed-form solution, so D rescales u_t by one scalar.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from dampwave.diagnostics.trace import EnergyTrace, TraceRecorder
from dampwave.errors import DomainError, SimulationError
from dampwave.spectral.domain import (
    PhysicalField,
    SpectralField,
    lp_norm,
    to_physical,
    to_spectral,
)
from dampwave.spectral.multipliers import MultiplierKind, MultiplierSpec, apply_multiplier

logger = logging.getLogger("dampwave.dynamics")

EXACT_PADDING = 3


class DampingKind(str, Enum):
    ENERGY = "energy"
    NONE = "none"
    CONSTANT = "constant"


@dataclass(frozen=True)
class ModelConfig:
    """
    quintic             include the u⁵ term
    damping             energy-coefficient, none or constant c·u_t
    projector           applied to u⁵; None keeps all N modes
    potential_in_energy whether ⅙‖u‖₆⁶ enters E; None means "when the quintic is on"
    padding             oversampling factor of the physical grid
    """
    quintic: bool = True
    damping: DampingKind = DampingKind.ENERGY
    damping_constant: float = 0.0
    projector: Optional[MultiplierSpec] = None
    potential_in_energy: Optional[bool] = None
    padding: int = EXACT_PADDING

    def __post_init__(self):
        object.__setattr__(self, "damping", DampingKind(self.damping))
        if self.damping_constant < 0:
            raise DomainError(f"damping constant must be >= 0, got {self.damping_constant}")
        if int(self.padding) != self.padding or self.padding < 1:
            raise DomainError(f"padding must be a positive integer, got {self.padding}")

    @property
    def include_potential(self) -> bool:
        if not self.quintic:
            return False
        return True if self.potential_in_energy is None else bool(self.potential_in_energy)

    @property
    def energy_is_lyapunov(self) -> bool:
        """E is nonincreasing along exact flows (conserved when undamped)"""
        if not self.quintic:
            return True
        smooth = self.projector is not None and self.projector.kind is MultiplierKind.SMOOTH
        return self.include_potential and not smooth


@dataclass(frozen=True)
class StepScheme:
    dt: float
    energy_growth_tolerance: float = 1e-3

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError(f"time step must be positive, got {self.dt}")

    def resolves(self, lambda_max: float) -> bool:
        return self.dt * lambda_max < math.pi


@dataclass(frozen=True)
class State:
    u: SpectralField
    v: SpectralField
    t: float = 0.0

    def __post_init__(self):
        if self.u.domain != self.v.domain:
            raise DomainError("u and u_t must share a domain")

    @property
    def domain(self):
        return self.u.domain

    @classmethod
    def rest(cls, domain, t: float = 0.0) -> "State":
        zero = SpectralField.zeros(domain)
        return cls(zero, zero, t)

    def is_finite(self) -> bool:
        return self.u.is_finite() and self.v.is_finite()

    def __neg__(self) -> "State":
        return State(-self.u, -self.v, self.t)


def _potential(u_phys: Optional[PhysicalField]) -> float:
    if u_phys is None:
        return 0.0
    return lp_norm(u_phys, 6) ** 6 / 6.0


def _samples(u: SpectralField, config: ModelConfig) -> Optional[PhysicalField]:
    return to_physical(u, config.padding) if config.quintic else None


def total_energy(state: State, config: ModelConfig, u_phys: Optional[PhysicalField] = None) -> float:
    """E = ½(‖∇u‖² + ‖u_t‖²) + ⅙‖u‖₆⁶ (last term only when included)"""
    energy = 0.5 * (state.u.gradient_norm_sq() + state.v.l2_norm_sq())
    if config.include_potential:
        if u_phys is None:
            u_phys = to_physical(state.u, config.padding)
        energy += _potential(u_phys)
    return energy


def higher_energy(state: State) -> float:
    """E₁ = ½(Σ λ_k² v_k² + Σ λ_k⁴ u_k²) = ½(‖∇u_t‖² + ‖Δu‖²)"""
    lam2 = state.domain.eigenvalues.ravel()
    u = state.u.coefficients.ravel()
    v = state.v.coefficients.ravel()
    return 0.5 * float(np.dot(lam2 * v, v) + np.dot(lam2 ** 2 * u, u))


def quintic_term(
    u: SpectralField,
    projector: Optional[MultiplierSpec] = None,
    padding: int = EXACT_PADDING,
    u_phys: Optional[PhysicalField] = None,
) -> SpectralField:
    """Π(u⁵) by pointwise fifth power on the padded grid; alias-free for padding >= 3"""
    if u_phys is None:
        u_phys = to_physical(u, padding)
    fifth = to_spectral(PhysicalField(u.domain, u_phys.values ** 5, u_phys.padding))
    return fifth if projector is None else apply_multiplier(projector, fifth)


def linear_substep(state: State, dt: float) -> State:
    """Exact flow of u_tt = Δu, one rotation per mode"""
    omega = state.domain.frequencies
    cos, sin = np.cos(omega * dt), np.sin(omega * dt)
    u, v = state.u.coefficients, state.v.coefficients
    return State(
        state.u.with_coefficients(u * cos + v * sin / omega),
        state.v.with_coefficients(-omega * u * sin + v * cos),
        state.t,
    )


def kick_substep(
    state: State,
    dt: float,
    config: ModelConfig,
    u_phys: Optional[PhysicalField] = None,
) -> State:
    """u_t <- u_t - dt·Π(u⁵) with u frozen"""
    if not config.quintic or dt == 0:
        return state
    kick = quintic_term(state.u, config.projector, config.padding, u_phys)
    return State(state.u, state.v - kick.scaled(dt), state.t)


def damping_factor(potential: float, kinetic: float, dt: float) -> float:
    """
    σ = √(K(dt)/K(0)) for K' = -2K(P + K), P frozen.

    K(t) = P K₀ e^{-2Pt} / (P + K₀ - K₀ e^{-2Pt}); at P = 0 this is
    K₀ / (1 + 2K₀t).
    """
    if kinetic <= 0.0 or dt == 0.0:
        return 1.0
    if potential > 0.0:
        growth = -math.expm1(-2.0 * potential * dt) / potential
    else:
        growth = 2.0 * dt
    ratio = math.exp(-2.0 * potential * dt) / (1.0 + kinetic * growth)
    return math.sqrt(ratio)


def damping_substep(
    state: State,
    dt: float,
    config: ModelConfig,
    u_phys: Optional[PhysicalField] = None,
) -> State:
    """Integrate u_t' = -E u_t (or -c u_t) with u frozen"""
    if config.damping is DampingKind.NONE or dt == 0:
        return state
    if config.damping is DampingKind.CONSTANT:
        sigma = math.exp(-config.damping_constant * dt)
    else:
        potential = 0.5 * state.u.gradient_norm_sq()
        if config.include_potential:
            potential += _potential(u_phys if u_phys is not None else to_physical(state.u, config.padding))
        sigma = damping_factor(potential, 0.5 * state.v.l2_norm_sq(), dt)
    return State(state.u, state.v.scaled(sigma), state.t)


def dissipation_rate(state: State, config: ModelConfig, energy: float) -> float:
    """γ‖u_t‖², the rate at which damping removes energy (γ = E, c or 0)"""
    if config.damping is DampingKind.NONE:
        return 0.0
    coefficient = config.damping_constant if config.damping is DampingKind.CONSTANT else energy
    return coefficient * state.v.l2_norm_sq()


def _advance(
    state: State,
    dt: float,
    config: ModelConfig,
    u_phys: Optional[PhysicalField],
) -> tuple[State, Optional[PhysicalField]]:
    """One Strang step; u_phys caches the padded samples of u between substeps"""
    half = 0.5 * dt
    state = damping_substep(state, half, config, u_phys)
    state = kick_substep(state, half, config, u_phys)
    state = linear_substep(state, dt)
    u_phys = _samples(state.u, config)
    state = kick_substep(state, half, config, u_phys)
    state = damping_substep(state, half, config, u_phys)
    return state, u_phys


def step(state: State, scheme: StepScheme, config: ModelConfig) -> State:
    """D(dt/2) K(dt/2) L(dt) K(dt/2) D(dt/2)"""
    new_state, _ = _advance(state, scheme.dt, config, _samples(state.u, config))
    new_state = State(new_state.u, new_state.v, state.t + scheme.dt)
    if not new_state.is_finite():
        raise SimulationError("non-finite coefficients after step", step=1, time=new_state.t)
    return new_state


@dataclass(frozen=True, eq=False)
class SimulationResult:
    trace: EnergyTrace
    final: State
    snapshots: list[State] = field(default_factory=list)
    steps: int = 0


def _sm_defect(state: State, config: ModelConfig, u_phys: Optional[PhysicalField]) -> float:
    """⟨(S_m - I)u⁵, u_t⟩, the energy defect of the smooth-projector scheme"""
    projector = config.projector
    if not config.quintic or projector is None or projector.kind is not MultiplierKind.SMOOTH:
        return 0.0
    fifth = quintic_term(state.u, None, config.padding, u_phys)
    return (apply_multiplier(projector, fifth) - fifth).inner(state.v)


def simulate(
    initial: State,
    config: ModelConfig,
    scheme: StepScheme,
    duration: float,
    sample_stride: int = 1,
    keep_snapshots: bool = False,
) -> SimulationResult:
    """
    Advance to initial.t + duration, sampling every sample_stride steps
    (and at the final step).  The dissipation integral is accumulated by
    the trapezoid rule at every step.
    """
    if duration <= 0:
        raise DomainError(f"duration must be positive, got {duration}")
    if sample_stride < 1:
        raise DomainError(f"sample stride must be >= 1, got {sample_stride}")
    domain = initial.domain
    if not scheme.resolves(domain.lambda_max):
        logger.warning(
            "dt*lambda_max = %.3f >= pi; splitting accuracy degrades", scheme.dt * domain.lambda_max)

    n_steps = max(1, math.ceil(duration / scheme.dt - 1e-9))
    recorder = TraceRecorder()
    snapshots: list[State] = []

    state = initial
    u_phys = _samples(state.u, config)
    energy = total_energy(state, config, u_phys)
    energy0 = energy
    rate = dissipation_rate(state, config, energy)
    dissipated = 0.0

    def sample(current: State, phys: Optional[PhysicalField], e: float) -> None:
        norm_grid = phys if phys is not None and phys.padding == EXACT_PADDING else to_physical(current.u, EXACT_PADDING)
        recorder.record(
            current.t, e, higher_energy(current), current.v.l2_norm_sq(), dissipated,
            lp_norm(norm_grid, 10), lp_norm(norm_grid, 12), _sm_defect(current, config, phys),
        )
        if keep_snapshots:
            snapshots.append(current)

    sample(state, u_phys, energy)
    for n in range(1, n_steps + 1):
        state, u_phys = _advance(state, scheme.dt, config, u_phys)
        state = State(state.u, state.v, initial.t + n * scheme.dt)
        if not state.is_finite():
            raise SimulationError("non-finite coefficients", step=n, time=state.t)

        energy = total_energy(state, config, u_phys)
        new_rate = dissipation_rate(state, config, energy)
        dissipated += 0.5 * scheme.dt * (rate + new_rate)
        rate = new_rate

        if config.energy_is_lyapunov and energy > energy0 * (1.0 + scheme.energy_growth_tolerance) + 1e-14:
            raise SimulationError(
                f"energy grew from {energy0:.6e} to {energy:.6e}", step=n, time=state.t,
                context={"energy0": energy0, "energy": energy})
        if n % sample_stride == 0 or n == n_steps:
            sample(state, u_phys, energy)

    return SimulationResult(recorder.finish(), state, snapshots, n_steps)
