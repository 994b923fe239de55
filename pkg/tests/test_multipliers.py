"""
Test sharp and smooth spectral multipliers
"""
import numpy as np
import pytest

from dampwave.errors import DomainError
from dampwave.spectral.domain import BoxDomain, SpectralField, random_field
from dampwave.spectral.multipliers import (
    CutoffProfile,
    MultiplierKind,
    MultiplierSpec,
    apply_multiplier,
    basis_samples,
    commutation_defect,
    convergence_defect,
    l2_contraction_defect,
    lp_operator_ratio,
    regularization_ratio,
)
from dampwave.services.multiplier_service import support_samples


@pytest.fixture
def domain():
    return BoxDomain(1, 64)


def _random(domain, seed=0, count=4):
    rng = np.random.default_rng(seed)
    return [random_field(domain, rng) for _ in range(count)]


def test_cutoff_profile_values():
    """Test χ is 1 on [0, 1], 0 beyond 2 and ½ at the midpoint"""
    chi = CutoffProfile()
    assert chi(0.0) == 1.0
    assert chi(1.0) == 1.0
    assert chi(2.0) == 0.0
    assert chi(3.5) == 0.0
    assert chi(1.5) == pytest.approx(0.5, abs=1e-15)
    assert chi(-1.3) == chi(1.3)


def test_cutoff_profile_monotone_ramp():
    """Test χ decreases through the ramp and stays in [0, 1]"""
    s = np.linspace(0.0, 2.5, 501)
    values = CutoffProfile()(s)
    assert np.all((values >= 0.0) & (values <= 1.0))
    assert np.all(np.diff(values) <= 0.0)


def test_invalid_level():
    """Test a nonpositive level is rejected"""
    with pytest.raises(DomainError):
        MultiplierSpec.smooth(0.0)
    with pytest.raises(DomainError):
        MultiplierSpec.sharp(-1.0)


def test_smooth_identity_regime(domain):
    """Test S_m v = v when every λ_k <= m"""
    v = _random(domain)[0]
    out = apply_multiplier(MultiplierSpec.smooth(domain.lambda_max), v)
    np.testing.assert_array_equal(out.coefficients, v.coefficients)
    assert l2_contraction_defect(MultiplierSpec.smooth(domain.lambda_max), [v]) == 1.0


def test_single_mode_outside_support(domain):
    """Test φ_k with λ_k >= 2m is annihilated"""
    v = SpectralField.mode(domain, (8,))
    assert apply_multiplier(MultiplierSpec.smooth(4.0), v).l2_norm() == 0.0
    assert apply_multiplier(MultiplierSpec.sharp(4.0), v).l2_norm() == 0.0


def test_sharp_keeps_low_modes(domain):
    """Test P_{1.5} keeps only k = 1"""
    v = _random(domain)[0]
    out = apply_multiplier(MultiplierSpec.sharp(1.5), v)
    assert out.coefficients[0] == v.coefficients[0]
    assert not np.any(out.coefficients[1:])


def test_l2_contraction(domain):
    """Test ‖S v‖ <= ‖v‖ for sharp and smooth cutoffs"""
    samples = _random(domain) + basis_samples(domain, limit=16)
    for spec in (MultiplierSpec.sharp(10.0), MultiplierSpec.smooth(10.0)):
        assert l2_contraction_defect(spec, samples) <= 1.0 + 1e-12
    assert l2_contraction_defect(MultiplierSpec.sharp(0.5), samples) == 0.0


def test_l2_contraction_zero_sample(domain):
    """Test a zero sample is rejected"""
    with pytest.raises(DomainError):
        l2_contraction_defect(MultiplierSpec.smooth(4.0), [SpectralField.zeros(domain)])


def test_commutation(domain):
    """Test S commutes with -Δ"""
    spec = MultiplierSpec.smooth(7.0)
    assert commutation_defect(spec, basis_samples(domain, limit=20)) == 0.0
    assert commutation_defect(spec, _random(domain), relative=True) <= 1e-12


def test_sharp_idempotent(domain):
    """Test P_m P_m = P_m exactly"""
    spec = MultiplierSpec.sharp(12.0)
    for v in _random(domain):
        once = apply_multiplier(spec, v)
        np.testing.assert_array_equal(apply_multiplier(spec, once).coefficients, once.coefficients)


def test_smooth_interpolates(domain):
    """Test P_m <= S_m <= P_{2m} weightwise"""
    for m in (4.0, 8.0, 16.0):
        smooth = MultiplierSpec.smooth(m).weights(domain)
        assert np.all(MultiplierSpec.sharp(m).weights(domain) <= smooth)
        assert np.all(smooth <= MultiplierSpec.sharp(2 * m).weights(domain))


def test_regularization_ratio_order_zero(domain):
    """Test the s = 0 ratio is the L² contraction"""
    spec = MultiplierSpec.smooth(8.0)
    assert regularization_ratio(spec, 0.0, _random(domain)) <= 1.0 + 1e-12


def test_regularization_ratio_uniform_in_m():
    """Test sup ‖S_m v‖_{H^s} / (m^s ‖v‖) varies by less than 2x over m"""
    domain = BoxDomain(1, 256)
    for s in (1.0, 2.0):
        ratios = []
        for m in (4.0, 8.0, 16.0, 32.0):
            ratios.append(regularization_ratio(MultiplierSpec.smooth(m), s, support_samples(domain, m)))
        # Verify the measured constant is of order one and flat in m
        assert 0.5 < min(ratios)
        assert max(ratios) / min(ratios) <= 2.0


def test_regularization_ratio_rejects_sharp(domain):
    """Test the ratio is only defined for smooth cutoffs"""
    with pytest.raises(DomainError):
        regularization_ratio(MultiplierSpec.sharp(4.0), 1.0, _random(domain))


def test_convergence_defect_tail_sum():
    """Test ‖S_m v - v‖² = Σ (1 - χ(λ_k/m))² c_k² for c_k = λ_k^{-2}"""
    domain = BoxDomain(1, 64)
    k = np.arange(1, 65, dtype=float)
    v = SpectralField(domain, k ** -4.0)
    levels = [2.0, 4.0, 8.0, 16.0]
    defects = convergence_defect(v, levels)
    chi = CutoffProfile()
    for m, defect in zip(levels, defects):
        expected = np.sum((1.0 - chi(k / m)) ** 2 * k ** -8.0)
        assert defect ** 2 == pytest.approx(expected, rel=1e-12)
    assert all(b < a for a, b in zip(defects, defects[1:]))


def test_convergence_defect_band_limited():
    """Test the defect reaches 0 once m covers the band"""
    domain = BoxDomain(1, 16)
    v = random_field(domain, np.random.default_rng(2), band=4)
    for kind in (MultiplierKind.SHARP, MultiplierKind.SMOOTH):
        defects = convergence_defect(v, [1.0, 2.0, 4.0, 8.0], kind)
        assert all(b <= a for a, b in zip(defects, defects[1:]))
        assert defects[-1] == 0.0
    assert convergence_defect(SpectralField.zeros(domain), [1.0, 2.0]) == [0.0, 0.0]


def test_lp_operator_ratio(domain):
    """Test empirical Lᵖ ratios are finite, seeded and exact in the identity regime"""
    sharp = MultiplierSpec.sharp(8.0)
    assert lp_operator_ratio(sharp, domain, 2.0, 4, seed=1) <= 1.0 + 1e-12
    identity = MultiplierSpec.smooth(domain.lambda_max)
    assert lp_operator_ratio(identity, domain, 10.0, 4, seed=1) == 1.0
    first = lp_operator_ratio(MultiplierSpec.smooth(8.0), domain, 10.0, 4, seed=3)
    second = lp_operator_ratio(MultiplierSpec.smooth(8.0), domain, 10.0, 4, seed=3)
    assert first == second
    assert 0.0 < first < np.inf


def test_lp_operator_ratio_rejects_endpoints(domain):
    """Test p must lie strictly between 1 and ∞"""
    with pytest.raises(DomainError):
        lp_operator_ratio(MultiplierSpec.smooth(4.0), domain, 1.0, 2, seed=0)


def test_basis_samples_order():
    """Test basis samples follow index order and respect the limit"""
    domain = BoxDomain(2, 4)
    samples = basis_samples(domain, limit=3)
    assert len(samples) == 3
    assert samples[1].coefficients[0, 1] == 1.0
    assert len(basis_samples(domain)) == 16
