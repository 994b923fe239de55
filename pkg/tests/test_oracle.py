"""
Test the DOP853 reference for small mode systems
"""
import itertools
import math

import numpy as np
import pytest

from dampwave.dynamics.galerkin import DampingKind, ModelConfig, State, StepScheme, quintic_term, simulate, total_energy
from dampwave.dynamics.oracle import ModeSystem, reference_solution, sextic_tensor
from dampwave.errors import DomainError
from dampwave.spectral.domain import BoxDomain, SpectralField
from dampwave.spectral.multipliers import MultiplierSpec

ORACLE_U = np.array([0.1, 0.05, 0.03, 0.02])
ORACLE_V = np.array([0.05, 0.0, 0.02, 0.0])


@pytest.fixture
def oracle_state():
    domain = BoxDomain(1, 4)
    return State(SpectralField(domain, ORACLE_U), SpectralField(domain, ORACLE_V))


def test_sextic_tensor_diagonal():
    """Test ∫φ₁⁶ = (2/π)³·5π/16"""
    tensor = sextic_tensor(3)
    assert tensor[0, 0, 0, 0, 0, 0] == pytest.approx(5.0 / (2.0 * math.pi ** 2), rel=1e-14)


def test_sextic_tensor_symmetric():
    """Test the tensor is invariant under index permutations"""
    tensor = sextic_tensor(3)
    for perm in itertools.islice(itertools.permutations(range(6)), 0, 720, 97):
        np.testing.assert_array_equal(tensor, np.transpose(tensor, perm))


@pytest.mark.parametrize("length", [math.pi, 2.0])
def test_sextic_tensor_matches_quadrature(length):
    """Test exact sextic integrals against the interior rule, exact at this degree"""
    m, size = 3, 200
    x = np.arange(1, size + 1) * length / (size + 1)
    phi = math.sqrt(2.0 / length) * np.sin(np.outer(np.arange(1, m + 1), x) * math.pi / length)
    quad = np.einsum("aj,bj,cj,dj,ej,fj->abcdef", phi, phi, phi, phi, phi, phi) * length / (size + 1)
    np.testing.assert_allclose(sextic_tensor(m, length), quad, atol=1e-12)


def test_mode_system_quintic_matches_pseudospectral(oracle_state):
    """Test the tensor contraction equals the dealiased u⁵ projection"""
    system = ModeSystem.build(oracle_state.domain, ModelConfig())
    np.testing.assert_allclose(
        system.quintic(ORACLE_U), quintic_term(oracle_state.u).coefficients, atol=1e-13)
    assert system.energy(ORACLE_U, ORACLE_V) == pytest.approx(total_energy(oracle_state, ModelConfig()), rel=1e-12)


def test_mode_system_limits():
    """Test the oracle refuses 2D, large and projected systems"""
    with pytest.raises(DomainError):
        ModeSystem.build(BoxDomain(2, 4), ModelConfig())
    with pytest.raises(DomainError):
        ModeSystem.build(BoxDomain(1, 16), ModelConfig())
    with pytest.raises(DomainError):
        ModeSystem.build(BoxDomain(1, 4), ModelConfig(projector=MultiplierSpec.sharp(2.0)))


def test_linear_oracle_agrees_to_round_off():
    """Test the exact rotation against DOP853 for an undamped linear mode"""
    domain = BoxDomain(1, 4)
    config = ModelConfig(quintic=False, damping=DampingKind.NONE)
    state = State(SpectralField.mode(domain, (1,), 0.5), SpectralField.zeros(domain))
    result = simulate(state, config, StepScheme(1e-3), 1.0, sample_stride=100, keep_snapshots=True)
    reference = reference_solution(ModeSystem.build(domain, config), state, result.trace.times)
    split = np.array([np.concatenate([s.u.coefficients, s.v.coefficients]) for s in result.snapshots])
    assert np.max(np.abs(split - reference)) < 1e-9


def test_damped_quintic_oracle(oracle_state):
    """Test the split-step solution stays within 1e-6 of the reference"""
    config = ModelConfig()
    result = simulate(oracle_state, config, StepScheme(1e-3), 1.0, sample_stride=100, keep_snapshots=True)
    reference = reference_solution(ModeSystem.build(oracle_state.domain, config), oracle_state, result.trace.times)
    split = np.array([np.concatenate([s.u.coefficients, s.v.coefficients]) for s in result.snapshots])
    np.testing.assert_allclose(reference[0], np.concatenate([ORACLE_U, ORACLE_V]))
    assert np.max(np.abs(split - reference)) <= 1e-6
