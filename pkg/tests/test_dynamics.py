"""
Test the split-step integrator and its exact substeps
"""
import logging
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from dampwave.dynamics.galerkin import (
    DampingKind,
    ModelConfig,
    State,
    StepScheme,
    damping_factor,
    damping_substep,
    higher_energy,
    kick_substep,
    linear_substep,
    quintic_term,
    simulate,
    step,
    total_energy,
)
from dampwave.errors import DomainError, SimulationError
from dampwave.spectral.domain import (
    BoxDomain,
    PhysicalField,
    SpectralField,
    apply_laplacian,
    integrate,
    lp_norm,
    random_field,
    to_physical,
)
from dampwave.spectral.multipliers import MultiplierSpec

QUINTIC = ModelConfig()
LINEAR = ModelConfig(quintic=False)
UNDAMPED = ModelConfig(damping=DampingKind.NONE)


def _state(domain, entries):
    """entries: {k: (u_amp, v_amp)} on a 1D domain"""
    u = np.zeros(domain.shape)
    v = np.zeros(domain.shape)
    for k, (a, b) in entries.items():
        u[k - 1], v[k - 1] = a, b
    return State(SpectralField(domain, u), SpectralField(domain, v))


@pytest.fixture
def small_state():
    return _state(BoxDomain(1, 16), {1: (0.5, 0.1), 2: (0.2, -0.1), 3: (0.05, 0.02)})


# Energy

def test_total_energy_rest():
    """Test E = 0 at rest"""
    assert total_energy(State.rest(BoxDomain(2, 8)), QUINTIC) == 0.0


def test_total_energy_sine():
    """Test E(a sin x, 0) = a²π/4 + a⁶·5π/96"""
    domain = BoxDomain(1, 8)
    a = 0.7
    state = State(SpectralField.mode(domain, (1,), a * math.sqrt(math.pi / 2)), SpectralField.zeros(domain))
    expected = a ** 2 * math.pi / 4 + a ** 6 * 5 * math.pi / 96
    assert total_energy(state, QUINTIC) == pytest.approx(expected, rel=1e-12)
    assert total_energy(state, LINEAR) == pytest.approx(a ** 2 * math.pi / 4, rel=1e-12)


def test_total_energy_velocity_only():
    """Test E(0, b φ₁) = b²/2"""
    domain = BoxDomain(1, 8)
    state = State(SpectralField.zeros(domain), SpectralField.mode(domain, (1,), 0.3))
    assert total_energy(state, QUINTIC) == pytest.approx(0.045, rel=1e-14)


def test_potential_excluded_without_quintic():
    """Test the sextic term never enters E of a linear model"""
    config = ModelConfig(quintic=False, potential_in_energy=True)
    assert not config.include_potential
    assert ModelConfig(potential_in_energy=False).include_potential is False


def test_higher_energy_single_mode():
    """Test E₁(c φ_k, 0) = ½ λ_k⁴ c²"""
    domain = BoxDomain(1, 8)
    state = State(SpectralField.mode(domain, (3,), 0.2), SpectralField.zeros(domain))
    assert higher_energy(state) == pytest.approx(0.5 * 81 * 0.04, rel=1e-12)


def test_higher_energy_by_quadrature():
    """Test E₁ = ½(⟨-Δv, v⟩ + ‖Δu‖²) against physical-space quadrature"""
    domain = BoxDomain(1, 32)
    rng = np.random.default_rng(0)
    state = State(random_field(domain, rng, smoothness=3), random_field(domain, rng, smoothness=2))
    lap_u = to_physical(apply_laplacian(state.u), 1)
    v_phys, lap_v = to_physical(state.v, 1), to_physical(apply_laplacian(state.v), 1)
    grad_v = integrate(PhysicalField(domain, v_phys.values * lap_v.values, 1))
    expected = 0.5 * (grad_v + lp_norm(lap_u, 2) ** 2)
    assert higher_energy(state) == pytest.approx(expected, rel=1e-10)


# Substeps

def test_quintic_term_of_sine():
    """Test sin⁵x = (10 sin x - 5 sin 3x + sin 5x)/16 on the sine basis"""
    domain = BoxDomain(1, 8)
    u = SpectralField.mode(domain, (1,), math.sqrt(math.pi / 2))
    expected = np.zeros(8)
    expected[[0, 2, 4]] = np.array([10.0, -5.0, 1.0]) / 16.0 * math.sqrt(math.pi / 2)
    np.testing.assert_allclose(quintic_term(u).coefficients, expected, atol=1e-13)


def test_quintic_term_projected():
    """Test a projector below every mode annihilates the nonlinearity"""
    domain = BoxDomain(1, 8)
    u = SpectralField.mode(domain, (1,), 1.0)
    assert quintic_term(u, MultiplierSpec.sharp(0.5)).l2_norm() == 0.0
    assert quintic_term(SpectralField.zeros(domain)).l2_norm() == 0.0


def test_linear_substep_identity_and_period(small_state):
    """Test L(0) = id and L(2π/λ_k) = id on mode k"""
    same = linear_substep(small_state, 0.0)
    np.testing.assert_array_equal(same.u.coefficients, small_state.u.coefficients)
    domain = BoxDomain(1, 8)
    state = _state(domain, {2: (0.3, 0.4)})
    back = linear_substep(state, math.pi)
    np.testing.assert_allclose(back.u.coefficients, state.u.coefficients, atol=1e-14)
    np.testing.assert_allclose(back.v.coefficients, state.v.coefficients, atol=1e-14)


def test_linear_substep_quarter_period():
    """Test (u, v) = (φ_k, 0) rotates to (0, -λ_k φ_k) after a quarter period"""
    domain = BoxDomain(1, 8)
    state = _state(domain, {3: (1.0, 0.0)})
    out = linear_substep(state, math.pi / 6)
    assert out.u.coefficients[2] == pytest.approx(0.0, abs=1e-15)
    assert out.v.coefficients[2] == pytest.approx(-3.0, rel=1e-14)


def test_linear_substep_conserves_energy(small_state):
    """Test the rotation conserves the linear energy"""
    out = linear_substep(small_state, 0.37)
    assert total_energy(out, LINEAR) == pytest.approx(total_energy(small_state, LINEAR), rel=1e-12)


def test_kick_substep(small_state):
    """Test K(dt) adds -dt·u⁵ to u_t and leaves u alone"""
    assert kick_substep(small_state, 0.0, QUINTIC) is small_state
    assert kick_substep(small_state, 0.1, LINEAR) is small_state
    out = kick_substep(small_state, 0.1, QUINTIC)
    np.testing.assert_array_equal(out.u.coefficients, small_state.u.coefficients)
    expected = small_state.v.coefficients - 0.1 * quintic_term(small_state.u).coefficients
    np.testing.assert_allclose(out.v.coefficients, expected, rtol=1e-14)

    # Verify against an ODE solve of v' = -u⁵ with u frozen
    rhs = -quintic_term(small_state.u).coefficients
    sol = solve_ivp(lambda t, y: rhs, (0.0, 0.1), small_state.v.coefficients, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(out.v.coefficients, sol.y[:, -1], atol=1e-12)


def test_kick_substep_at_rest():
    """Test the kick does nothing when u = 0"""
    domain = BoxDomain(1, 8)
    state = _state(domain, {1: (0.0, 0.5)})
    out = kick_substep(state, 0.2, QUINTIC)
    np.testing.assert_array_equal(out.v.coefficients, state.v.coefficients)


def test_damping_factor_limits():
    """Test σ = 1 without kinetic energy or time and the P = 0 closed form"""
    assert damping_factor(0.3, 0.0, 0.1) == 1.0
    assert damping_factor(0.3, 0.2, 0.0) == 1.0
    assert damping_factor(0.0, 0.5, 0.2) ** 2 == pytest.approx(1.0 / (1.0 + 2 * 0.5 * 0.2), rel=1e-14)


@pytest.mark.parametrize("potential,kinetic,dt", [(0.7, 0.4, 0.3), (1.0, 1.0, 0.1), (1e-9, 2.0, 0.05)])
def test_damping_factor_matches_ode(potential, kinetic, dt):
    """Test σ² = K(dt)/K₀ for K' = -2K(P + K)"""
    sol = solve_ivp(lambda t, k: -2.0 * k * (potential + k), (0.0, dt), [kinetic], rtol=1e-12, atol=1e-16)
    assert damping_factor(potential, kinetic, dt) ** 2 == pytest.approx(sol.y[0, -1] / kinetic, rel=1e-9)


def test_damping_substep(small_state):
    """Test D scales u_t only, by one scalar"""
    out = damping_substep(small_state, 0.05, QUINTIC)
    np.testing.assert_array_equal(out.u.coefficients, small_state.u.coefficients)
    moving = small_state.v.coefficients != 0
    ratio = out.v.coefficients[moving] / small_state.v.coefficients[moving]
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-14)
    assert 0.0 < ratio[0] < 1.0
    assert damping_substep(small_state, 0.05, UNDAMPED) is small_state
    constant = ModelConfig(damping=DampingKind.CONSTANT, damping_constant=2.0)
    scaled = damping_substep(small_state, 0.1, constant)
    np.testing.assert_allclose(scaled.v.coefficients, small_state.v.coefficients * math.exp(-0.2), rtol=1e-14)


def test_damping_substep_rest_velocity():
    """Test D leaves u_t = 0 untouched"""
    domain = BoxDomain(1, 8)
    state = _state(domain, {1: (0.5, 0.0)})
    out = damping_substep(state, 0.1, QUINTIC)
    assert out.v.l2_norm() == 0.0


def test_invalid_parameters():
    """Test model and scheme validation"""
    with pytest.raises(DomainError):
        ModelConfig(damping_constant=-1.0)
    with pytest.raises(DomainError):
        StepScheme(0.0)
    with pytest.raises(DomainError):
        State(SpectralField.zeros(BoxDomain(1, 8)), SpectralField.zeros(BoxDomain(1, 16)))


# Stepping

def test_step_rest_state():
    """Test the rest state is a fixed point"""
    domain = BoxDomain(2, 8)
    out = step(State.rest(domain), StepScheme(1e-2), QUINTIC)
    assert out.u.l2_norm() == 0.0
    assert out.v.l2_norm() == 0.0
    assert out.t == pytest.approx(1e-2)


def test_step_conserves_linear_energy(small_state):
    """Test an undamped linear step conserves E"""
    config = ModelConfig(quintic=False, damping=DampingKind.NONE)
    out = step(small_state, StepScheme(1e-2), config)
    assert total_energy(out, config) == pytest.approx(total_energy(small_state, config), rel=1e-12)


def test_simulate_zero_data():
    """Test zero data gives an all-zero trace"""
    result = simulate(State.rest(BoxDomain(1, 16)), QUINTIC, StepScheme(1e-2), 0.5, sample_stride=5)
    assert not np.any(result.trace.energy)
    assert not np.any(result.trace.l10)
    assert not np.any(result.trace.diss_integral)


def test_simulate_sampling(small_state):
    """Test samples every stride steps plus the initial one"""
    result = simulate(small_state, QUINTIC, StepScheme(1e-3), 0.1, sample_stride=10)
    assert result.steps == 100
    assert len(result.trace) == 11
    assert result.trace.times[-1] == pytest.approx(0.1, abs=1e-12)
    assert result.final.t == pytest.approx(0.1, abs=1e-12)


def test_simulate_energy_nonincreasing(small_state):
    """Test E decreases along damped runs"""
    for config in (LINEAR, QUINTIC):
        trace = simulate(small_state, config, StepScheme(1e-3), 1.0, sample_stride=10).trace
        # quintic splitting leaves O(dt²) wiggles in E
        assert np.all(np.diff(trace.energy) <= (1e-12 + 1e-6) * trace.energy[0])
        assert trace.energy[-1] < trace.energy[0]


def test_simulate_undamped_quintic_conservation(small_state):
    """Test E drifts by O(dt²) only without damping"""
    trace = simulate(small_state, UNDAMPED, StepScheme(1e-3), 2.0, sample_stride=10).trace
    drift = np.max(np.abs(trace.energy - trace.energy[0])) / trace.energy[0]
    assert drift < 1e-4
    assert not np.any(trace.diss_integral)


def test_simulate_negation_symmetry(small_state):
    """Test (u₀, v₀) -> (-u₀, -v₀) negates the solution and keeps E"""
    scheme = StepScheme(1e-3)
    pos = simulate(small_state, QUINTIC, scheme, 0.5, sample_stride=50)
    neg = simulate(-small_state, QUINTIC, scheme, 0.5, sample_stride=50)
    np.testing.assert_allclose(neg.trace.energy, pos.trace.energy, rtol=1e-14)
    scale = np.max(np.abs(pos.final.u.coefficients))
    np.testing.assert_allclose(neg.final.u.coefficients, -pos.final.u.coefficients, rtol=0, atol=1e-14 * scale)


def test_simulate_sharp_projector_stays_band_limited():
    """Test P_m data under the P_m scheme never leaves the band"""
    domain = BoxDomain(1, 16)
    state = _state(domain, {1: (0.6, 0.1), 2: (0.3, 0.0), 3: (0.1, 0.2)})
    config = ModelConfig(projector=MultiplierSpec.sharp(4.5))
    final = simulate(state, config, StepScheme(1e-3), 0.5, sample_stride=50).final
    assert not np.any(final.u.coefficients[4:])
    assert not np.any(final.v.coefficients[4:])
    assert np.any(final.u.coefficients[:4])


def test_simulate_smooth_projector_defect():
    """Test ⟨(S_m - I)u⁵, u_t⟩ is recorded for smooth-projector runs only"""
    domain = BoxDomain(1, 16)
    state = _state(domain, {1: (0.8, 0.2), 2: (0.4, 0.0), 3: (0.0, 0.3)})
    smooth = ModelConfig(projector=MultiplierSpec.smooth(2.0))
    assert not smooth.energy_is_lyapunov
    trace = simulate(state, smooth, StepScheme(1e-3), 0.1, sample_stride=10).trace
    assert trace.sm_defect[0] != 0.0
    plain = simulate(state, QUINTIC, StepScheme(1e-3), 0.1, sample_stride=10).trace
    assert not np.any(plain.sm_defect)


def test_simulate_non_finite_data():
    """Test non-finite coefficients abort with SimulationError"""
    domain = BoxDomain(1, 8)
    u = np.zeros(8)
    u[0] = np.nan
    state = State(SpectralField(domain, u), SpectralField.zeros(domain))
    with pytest.raises(SimulationError) as excinfo:
        simulate(state, LINEAR, StepScheme(1e-2), 0.1)
    assert excinfo.value.step == 1


def test_simulate_warns_on_unresolved_dt(caplog):
    """Test dt·λ_max >= π is logged as a warning"""
    domain = BoxDomain(1, 64)
    with caplog.at_level(logging.WARNING, logger="dampwave.dynamics"):
        simulate(State.rest(domain), LINEAR, StepScheme(0.06), 0.06)
    assert any("lambda_max" in record.getMessage() for record in caplog.records)


def test_simulate_invalid_arguments(small_state):
    """Test duration and stride validation"""
    with pytest.raises(DomainError):
        simulate(small_state, QUINTIC, StepScheme(1e-3), 0.0)
    with pytest.raises(DomainError):
        simulate(small_state, QUINTIC, StepScheme(1e-3), 1.0, sample_stride=0)


def test_simulate_snapshots(small_state):
    """Test snapshots are kept at the sample times"""
    result = simulate(small_state, QUINTIC, StepScheme(1e-3), 0.05, sample_stride=10, keep_snapshots=True)
    assert [s.t for s in result.snapshots] == pytest.approx(list(result.trace.times))
