"""
Multiplier property suite
"""
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from dampwave.errors import ReasonCode
from dampwave.logger import run_logger
from dampwave.models.params import ExperimentConfig
from dampwave.spectral.domain import BoxDomain, SpectralField, random_field
from dampwave.spectral.multipliers import (
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
from dampwave.utils.initial_data import build_domain
from dampwave.utils.persistence import ensure_output_dir, write_json

DEFAULT_LEVELS = (4.0, 8.0, 16.0, 32.0)
ROUND_OFF = 1e-12
REGULARIZATION_ORDERS = (1.0, 2.0)
REGULARIZATION_SPREAD = 2.0
LP_EXPONENTS = (2.0, 4.0, 10.0)
CONVERGENCE_BAND = 4


def _random_samples(domain: BoxDomain, seed: int, count: int) -> List[SpectralField]:
    rng = np.random.default_rng(seed)
    return [random_field(domain, rng) for _ in range(count)]


def _weights_between(lower: np.ndarray, middle: np.ndarray, upper: np.ndarray) -> bool:
    return bool(np.all(lower <= middle) and np.all(middle <= upper))


def _spec_row(spec: MultiplierSpec, domain: BoxDomain, samples: List[SpectralField], seed: int, sample_count: int) -> Dict[str, Any]:
    """Measured constants of one multiplier"""
    contraction = l2_contraction_defect(spec, samples)
    commutation = commutation_defect(spec, samples, relative=True)
    row: Dict[str, Any] = {
        'kind': spec.kind.value,
        'level': spec.level,
        'l2_contraction': contraction,
        'commutation_relative': commutation,
        'lp_ratios': {
            f"{p:g}": lp_operator_ratio(spec, domain, p, sample_count, seed) for p in LP_EXPONENTS
        },
    }
    weights = spec.weights(domain)
    if spec.kind is MultiplierKind.SHARP:
        twice = apply_multiplier(spec, apply_multiplier(spec, samples[-1]))
        once = apply_multiplier(spec, samples[-1])
        row['idempotent'] = bool(np.array_equal(twice.coefficients, once.coefficients))
    else:
        row['interpolates'] = _weights_between(
            MultiplierSpec.sharp(spec.level).weights(domain), weights,
            MultiplierSpec.sharp(2.0 * spec.level).weights(domain),
        )
        support = support_samples(domain, spec.level)
        row['regularization'] = {f"{s:g}": regularization_ratio(spec, s, support) for s in REGULARIZATION_ORDERS}
    return row


def support_samples(domain: BoxDomain, level: float) -> List[SpectralField]:
    """φ_k for every λ_k < 2m; modes outside the smooth cutoff's support only contribute 0"""
    inside = np.argwhere(domain.frequencies < 2.0 * level)
    return [SpectralField.mode(domain, tuple(int(i) + 1 for i in index)) for index in inside]


def _convergence_rows(domain: BoxDomain, seed: int, levels: Sequence[float]) -> List[Dict[str, Any]]:
    """Defects ‖S_m v - v‖ for a band-limited v, extended until they reach 0"""
    v = random_field(domain, np.random.default_rng(seed), band=CONVERGENCE_BAND)
    band_top = float(np.max(domain.frequencies[(slice(0, CONVERGENCE_BAND),) * domain.dimension]))
    family = sorted(set(levels) | {band_top, 2.0 * band_top})
    rows = []
    for kind in (MultiplierKind.SHARP, MultiplierKind.SMOOTH):
        defects = convergence_defect(v, family, kind)
        rows.append({
            'kind': kind.value,
            'levels': family,
            'defects': defects,
            'reaches_zero': bool(defects[-1] == 0.0),
            'nonincreasing': all(b <= a for a, b in zip(defects, defects[1:])),
        })
    return rows


def run_multiplier_suite(
    domain: BoxDomain,
    specs: Sequence[MultiplierSpec],
    seed: int,
    sample_count: int = 8,
) -> Dict[str, Any]:
    """
    Run every multiplier property check and report pass/fail per property.

    Args:
        domain: Domain the multipliers act on
        specs: Sharp and smooth multipliers to examine
        seed: Seed of the random sample fields
        sample_count: Random fields per check

    Returns:
        Dict with one row of measured constants per spec, the convergence
        table and a property -> passed map
    """
    samples = basis_samples(domain, limit=4 * domain.modes) + _random_samples(domain, seed, sample_count)
    rows = []
    for spec in specs:
        run_logger.log_stage("multiplier-test", "spec", {"kind": spec.kind.value, "level": spec.level})
        rows.append(_spec_row(spec, domain, samples, seed, sample_count))

    smooth = [row for row in rows if row['kind'] == MultiplierKind.SMOOTH.value]
    sharp = [row for row in rows if row['kind'] == MultiplierKind.SHARP.value]
    regularization_spread = {}
    for s in REGULARIZATION_ORDERS:
        values = [row['regularization'][f"{s:g}"] for row in smooth]
        regularization_spread[f"{s:g}"] = max(values) / min(values) if values and min(values) > 0 else None
    convergence = _convergence_rows(domain, seed, [spec.level for spec in specs] or DEFAULT_LEVELS)

    properties = {
        'contraction': all(row['l2_contraction'] <= 1.0 + ROUND_OFF for row in rows),
        'commutation': all(row['commutation_relative'] <= ROUND_OFF for row in rows),
        'sharp_idempotent': all(row['idempotent'] for row in sharp),
        'smooth_interpolates': all(row['interpolates'] for row in smooth),
        'regularization_uniform': all(
            spread is not None and spread <= REGULARIZATION_SPREAD for spread in regularization_spread.values()
        ) if smooth else True,
        'convergence_reaches_zero': all(row['reaches_zero'] for row in convergence),
        'l2_ratio_bounded': all(row['lp_ratios']['2'] <= 1.0 + ROUND_OFF for row in rows),
    }
    passed = all(properties.values())
    return {
        'success': passed,
        'reason': (ReasonCode.OK if passed else ReasonCode.INVARIANT_VIOLATION).value,
        'domain': {'dimension': domain.dimension, 'modes': domain.modes, 'lengths': list(domain.lengths)},
        'seed': seed,
        'specs': rows,
        'regularization_spread': regularization_spread,
        'convergence': convergence,
        'properties': properties,
    }


def run_multiplier_test(config: ExperimentConfig, levels: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """Smooth and sharp multipliers at run.levels (default m = 4, 8, 16, 32); writes multipliers.json"""
    domain = build_domain(config.domain)
    levels = list(levels or config.run.levels or DEFAULT_LEVELS)
    specs = [MultiplierSpec.smooth(float(m)) for m in levels] + [MultiplierSpec.sharp(float(m)) for m in levels]
    seed = config.run.seed if config.run.seed is not None else 0
    result = run_multiplier_suite(domain, specs, seed)
    out = ensure_output_dir(config.run.output_dir)
    payload = {key: value for key, value in result.items() if key not in ('success', 'reason')}
    payload['config_hash'] = config.config_hash()
    write_json(out / "multipliers.json", payload)
    result['output_dir'] = str(out)
    return result
