"""
Build domains, models, schemes and initial states from a validated config
"""
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from dampwave.dynamics.galerkin import ModelConfig, State, StepScheme, total_energy
from dampwave.errors import ConfigError, DomainError
from dampwave.models.params import DomainParams, ExperimentConfig, ModelParams, SchemeParams, parse_mode_list
from dampwave.spectral.domain import BoxDomain, SpectralField, project_function, random_field
from dampwave.spectral.multipliers import MultiplierSpec, apply_multiplier


def build_domain(params: DomainParams, modes: Optional[int] = None) -> BoxDomain:
    """BoxDomain from the [domain] section; modes overrides N (used by sweeps)"""
    return BoxDomain(params.dimension, params.modes if modes is None else modes, tuple(params.lengths))


def build_model(params: ModelParams) -> ModelConfig:
    projector = None
    if params.projector != "none":
        projector = MultiplierSpec(params.projector, params.projector_level)
    return ModelConfig(
        quintic=params.quintic,
        damping=params.damping,
        damping_constant=params.damping_constant,
        projector=projector,
        potential_in_energy=params.potential_in_energy,
        padding=params.padding,
    )


def build_scheme(params: SchemeParams) -> StepScheme:
    return StepScheme(params.dt, params.energy_growth_tolerance)


def bump_profile(center: tuple[float, ...], width: float):
    """Product of exp(1 - 1/(1 - s²)) bumps, peak value 1, support |x_i - c_i| < width"""
    def profile(*axes):
        out = np.ones_like(axes[0])
        for x, c in zip(axes, center):
            s2 = ((x - c) / width) ** 2
            inside = s2 < 1.0
            factor = np.zeros_like(x)
            factor[inside] = np.exp(1.0 - 1.0 / (1.0 - s2[inside]))
            out = out * factor
        return out
    return profile


def rescale_to_energy(state: State, config: ModelConfig, target: float) -> State:
    """
    Scale (u, u_t) by a > 0 so that E(a·u, a·u_t) = target.

    E is strictly increasing in a for nonzero data (quadratic part plus a
    nonnegative sextic part), so the root is unique; brentq brackets it.
    """
    if not target > 0:
        raise ConfigError(f"target energy must be positive, got {target}")
    base = total_energy(state, config)
    if base <= 0:
        raise ConfigError("cannot rescale zero initial data to a positive energy")

    def gap(a: float) -> float:
        return total_energy(State(state.u.scaled(a), state.v.scaled(a), state.t), config) - target

    upper = math.sqrt(target / base)
    while gap(upper) < 0:
        upper *= 2.0
    amplitude = brentq(gap, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return State(state.u.scaled(amplitude), state.v.scaled(amplitude), state.t)


def _mode_state(domain: BoxDomain, text: str) -> State:
    u = np.zeros(domain.shape)
    v = np.zeros(domain.shape)
    for index, u_amp, v_amp in parse_mode_list(text):
        if len(index) != domain.dimension:
            raise ConfigError(f"mode {index} does not match dimension {domain.dimension}")
        if any(k < 1 or k > domain.modes for k in index):
            raise ConfigError(f"mode {index} outside 1..{domain.modes}")
        slot = tuple(k - 1 for k in index)
        u[slot] += u_amp
        v[slot] += v_amp
    return State(SpectralField(domain, u), SpectralField(domain, v))


def _bump_state(domain: BoxDomain, config: ExperimentConfig) -> State:
    initial = config.initial
    center = tuple(initial.center) or tuple(0.5 * length for length in domain.lengths)
    if len(center) != domain.dimension:
        raise ConfigError(f"bump center needs {domain.dimension} coordinates, got {len(center)}")
    shape = project_function(domain, bump_profile(center, initial.width))
    return State(shape.scaled(initial.amplitude), shape.scaled(initial.velocity_amplitude))


def _random_state(domain: BoxDomain, config: ExperimentConfig) -> State:
    initial = config.initial
    rng = np.random.default_rng(config.run.seed)
    # u one derivative smoother than u_t, as in H¹ x L²
    u = random_field(domain, rng, band=initial.band, smoothness=initial.smoothness + 1.0)
    v = random_field(domain, rng, band=initial.band, smoothness=initial.smoothness)
    return State(u.scaled(initial.amplitude), v.scaled(initial.velocity_amplitude))


def build_initial_state(
    config: ExperimentConfig,
    domain: Optional[BoxDomain] = None,
    model: Optional[ModelConfig] = None,
    target_energy: Optional[float] = None,
) -> State:
    """
    Initial data per the [initial] section, projected by the model's
    projector (P_m u₀ or S_m u₀) and then rescaled to target_energy if one
    is given (argument first, then the config value).
    """
    domain = domain or build_domain(config.domain)
    model = model or build_model(config.model)
    kind = config.initial.kind
    if kind == "zero":
        return State.rest(domain)
    if kind == "modes":
        state = _mode_state(domain, config.initial.modes)
    elif kind == "bump":
        state = _bump_state(domain, config)
    elif kind == "random":
        state = _random_state(domain, config)
    else:
        raise ConfigError(f"unknown initial data kind {kind!r}")

    if model.projector is not None:
        state = State(apply_multiplier(model.projector, state.u), apply_multiplier(model.projector, state.v))
    target = target_energy if target_energy is not None else config.initial.target_energy
    if target is not None:
        state = rescale_to_energy(state, model, target)
    if not state.is_finite():
        raise DomainError("initial data has non-finite coefficients")
    return state
