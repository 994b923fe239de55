"""
Comparison of the split-step integrator with a high-precision reference
"""
from typing import Any, Dict

import numpy as np

from dampwave.dynamics.galerkin import simulate
from dampwave.dynamics.oracle import ModeSystem, reference_solution
from dampwave.errors import OracleMismatch, ReasonCode
from dampwave.logger import run_logger
from dampwave.models.params import ExperimentConfig
from dampwave.utils.initial_data import build_domain, build_initial_state, build_model, build_scheme
from dampwave.utils.persistence import ensure_output_dir, write_json

ORACLE_THRESHOLD = 1e-6


def run_oracle_check(config: ExperimentConfig, threshold: float = ORACLE_THRESHOLD) -> Dict[str, Any]:
    """
    Integrate the configured small 1D system both ways and compare.

    Args:
        config: Validated configuration of a 1D domain with at most
            MAX_ORACLE_MODES modes and no projector
        threshold: Largest accepted sup-norm deviation

    Returns:
        Dict with the sup deviation over all sampled coefficients of u and u_t

    Raises:
        OracleMismatch: deviation above threshold (after oracle.json is written)
    """
    domain = build_domain(config.domain)
    model = build_model(config.model)
    system = ModeSystem.build(domain, model)
    initial = build_initial_state(config, domain, model)

    result = simulate(initial, model, build_scheme(config.scheme), config.run.duration,
                      config.run.sample_stride, keep_snapshots=True)
    times = np.array([s.t for s in result.snapshots])
    split = np.array([np.concatenate([s.u.coefficients, s.v.coefficients]) for s in result.snapshots])
    run_logger.log_stage("oracle-check", "reference", {"samples": len(times), "modes": domain.modes})
    reference = reference_solution(system, initial, times)

    errors = np.max(np.abs(split - reference), axis=1)
    deviation = float(np.max(errors))
    worst = int(np.argmax(errors))
    payload = {
        'config_hash': config.config_hash(),
        'modes': domain.modes,
        'dt': config.scheme.dt,
        'duration': config.run.duration,
        'threshold': threshold,
        'deviation': deviation,
        'worst_time': float(times[worst]),
        'energy_drift': float(abs(system.energy(*np.split(split[-1], 2)) - system.energy(*np.split(reference[-1], 2)))),
    }
    out = ensure_output_dir(config.run.output_dir)
    write_json(out / "oracle.json", payload)
    if deviation > threshold:
        raise OracleMismatch(
            f"split-step deviates from the reference by {deviation:.3e} > {threshold:.1e}", payload)
    return {'success': True, 'reason': ReasonCode.OK.value, **payload, 'output_dir': str(out)}
