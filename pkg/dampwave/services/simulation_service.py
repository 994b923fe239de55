"""
Single runs and convergence sweeps
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

import numpy as np

from dampwave.diagnostics.decay import decay_fit
from dampwave.diagnostics.energy import (
    energy_identity_residual,
    energy_total_variation,
    first_increase,
    quadrature_error_estimate,
)
from dampwave.diagnostics.nakao import nakao_report
from dampwave.diagnostics.strichartz import strichartz_norm
from dampwave.dynamics.galerkin import (
    DampingKind,
    ModelConfig,
    SimulationResult,
    State,
    StepScheme,
    simulate,
    total_energy,
)
from dampwave.errors import DegenerateTraceError, ReasonCode
from dampwave.logger import run_logger
from dampwave.models.params import ExperimentConfig, RunSummary
from dampwave.spectral.multipliers import MultiplierKind
from dampwave.utils.initial_data import build_domain, build_initial_state, build_model, build_scheme
from dampwave.utils.persistence import SUMMARY_FILE, TRACE_FILE, ensure_output_dir, write_json, write_trace

MONOTONE_SLACK = 1e-12
RESOLUTION_TAIL = 1e-8


def band_limited(state: State, model: ModelConfig) -> Optional[bool]:
    """For sharp-projector runs: are all coefficients above the level exactly zero?"""
    projector = model.projector
    if projector is None or projector.kind is not MultiplierKind.SHARP:
        return None
    outside = state.domain.frequencies > projector.level
    return bool(np.all(state.u.coefficients[outside] == 0.0) and np.all(state.v.coefficients[outside] == 0.0))


def summarize_run(
    config: ExperimentConfig,
    model: ModelConfig,
    scheme: StepScheme,
    result: SimulationResult,
    wall_clock: float = 0.0,
) -> RunSummary:
    """
    Evaluate every diagnostic that applies to a finished run.

    Args:
        config: Validated experiment configuration
        model: Model built from the config
        scheme: Time-step scheme built from the config
        result: Output of simulate()
        wall_clock: Seconds spent; logged, never persisted

    Returns:
        RunSummary with the list of violated invariants
    """
    trace = result.trace
    energy0 = float(trace.energy[0])
    variation = energy_total_variation(trace)
    # exact splitting keeps linear runs monotone; the kick costs O(dt³) per step
    slack = MONOTONE_SLACK + (scheme.dt ** 2 if model.quintic else 0.0)
    monotone = first_increase(trace, slack) is None
    violations: List[str] = []

    fit = None
    window = config.run.fit_window
    if window is not None and window[1] <= trace.times[-1] + 1e-12 and window[0] >= trace.times[0]:
        try:
            fit = decay_fit(trace, tuple(window)).as_dict()
        except DegenerateTraceError as e:
            run_logger.log_warning("decay_fit_skipped", str(e), {"window": window})

    nakao = None
    if model.damping is DampingKind.ENERGY and trace.duration >= 2.0 and energy0 > 0:
        try:
            report = nakao_report(trace)
            nakao = report.as_dict()
            if not report.dominates:
                violations.append("nakao_envelope")
        except DegenerateTraceError as e:
            run_logger.log_warning("nakao_skipped", str(e))

    if model.damping is not DampingKind.NONE and model.energy_is_lyapunov and not monotone:
        violations.append("energy_increase")
    limited = band_limited(result.final, model)
    if limited is False:
        violations.append("band_limit")

    quadrature = quadrature_error_estimate(result.final.u)
    return RunSummary(
        config_hash=config.config_hash(),
        final_time=float(trace.times[-1]),
        steps=result.steps,
        final_energy=float(trace.energy[-1]),
        final_higher_energy=float(trace.higher_energy[-1]),
        initial_energy=energy0,
        identity_residual=energy_identity_residual(trace),
        energy_total_variation=variation.total_variation,
        energy_monotone=monotone,
        decay_fit=fit,
        nakao=nakao,
        strichartz_l5_l10=strichartz_norm(trace, 5, 10),
        strichartz_l4_l12=strichartz_norm(trace, 4, 12),
        quadrature_error_l10=quadrature.l10_relative_change,
        quadrature_error_l12=quadrature.l12_relative_change,
        band_limited=limited,
        max_sm_defect=float(np.max(np.abs(trace.sm_defect))),
        violations=violations,
        wall_clock_seconds=wall_clock,
    )


def run_simulate(config: ExperimentConfig) -> Dict[str, Any]:
    """
    Run one simulation and write trace.csv and summary.json.

    Args:
        config: Validated experiment configuration

    Returns:
        Dict with success flag, reason code, summary and output paths
    """
    started = time.perf_counter()
    domain = build_domain(config.domain)
    model = build_model(config.model)
    scheme = build_scheme(config.scheme)
    initial = build_initial_state(config, domain, model)
    run_logger.log_stage("simulate", "initial_data", {"energy": total_energy(initial, model)})

    result = simulate(initial, model, scheme, config.run.duration, config.run.sample_stride)
    summary = summarize_run(config, model, scheme, result, time.perf_counter() - started)

    out = ensure_output_dir(config.run.output_dir)
    trace_path = write_trace(out / TRACE_FILE, result.trace, summary.config_hash)
    summary_path = write_json(out / SUMMARY_FILE, summary.model_dump(mode="json"))

    success = not summary.violations
    return {
        'success': success,
        'reason': (ReasonCode.OK if success else ReasonCode.INVARIANT_VIOLATION).value,
        'summary': summary,
        'trace_path': str(trace_path),
        'summary_path': str(summary_path),
    }


def energy_norm_difference(a: State, b: State) -> float:
    """(‖∇(u_a - u_b)‖² + ‖v_a - v_b‖²)^{1/2} on the finer of the two domains"""
    fine = a.domain if a.domain.modes >= b.domain.modes else b.domain
    du = a.u.embed(fine) - b.u.embed(fine)
    dv = a.v.embed(fine) - b.v.embed(fine)
    return math.sqrt(du.gradient_norm_sq() + dv.l2_norm_sq())


def spectral_tail(state: State) -> float:
    """Share of ‖∇u‖² + ‖v‖² carried by modes with some k_i > N/2"""
    domain = state.domain
    k = np.indices(domain.shape).max(axis=0) + 1
    high = k > domain.modes // 2
    weights = domain.eigenvalues * state.u.coefficients ** 2 + state.v.coefficients ** 2
    total = float(np.sum(weights))
    return float(np.sum(weights[high])) / total if total > 0 else 0.0


def _sweep_member(config: ExperimentConfig, model: ModelConfig, scheme: StepScheme, initial: State) -> SimulationResult:
    run_logger.log_stage("sweep-m", "member_start", {"modes": initial.domain.modes})
    return simulate(initial, model, scheme, config.run.duration, config.run.sample_stride)


def run_convergence_sweep(config: ExperimentConfig) -> Dict[str, Any]:
    """
    Run the same initial data at every level N in run.levels.

    The data is built once on the finest level and truncated to the others.
    Member runs execute concurrently (run.workers threads); the comparison
    table is assembled after all of them finish.

    Args:
        config: Validated experiment configuration

    Returns:
        Dict with per-level rows (Strichartz norms, resolution flag) and
        the energy-norm differences between consecutive levels at t = T
    """
    levels = list(config.run.levels) or [config.domain.modes]
    model = build_model(config.model)
    scheme = build_scheme(config.scheme)
    finest = build_initial_state(config, build_domain(config.domain, levels[-1]), model)
    initials = [
        State(finest.u.embed(build_domain(config.domain, n)), finest.v.embed(build_domain(config.domain, n)))
        for n in levels
    ]

    with ThreadPoolExecutor(max_workers=config.run.workers) as pool:
        results = list(pool.map(lambda s: _sweep_member(config, model, scheme, s), initials))

    out = ensure_output_dir(config.run.output_dir)
    config_hash = config.config_hash()
    rows = []
    for n, result in zip(levels, results):
        write_trace(out / f"trace_N{n}.csv", result.trace, config_hash)
        tail = spectral_tail(result.final)
        resolved = scheme.resolves(result.final.domain.lambda_max) and tail <= RESOLUTION_TAIL
        if not resolved:
            run_logger.log_warning("unresolved_level", f"N={n} does not resolve the dynamics", {"tail": tail})
        rows.append({
            'modes': n,
            'final_energy': float(result.trace.energy[-1]),
            'strichartz_l5_l10': strichartz_norm(result.trace, 5, 10),
            'strichartz_l4_l12': strichartz_norm(result.trace, 4, 12),
            'spectral_tail': tail,
            'resolved': resolved,
        })

    differences = []
    for (n_a, a), (n_b, b) in zip(zip(levels, results), zip(levels[1:], results[1:])):
        y_a, y_b = strichartz_norm(a.trace, 5, 10), strichartz_norm(b.trace, 5, 10)
        differences.append({
            'coarse': n_a,
            'fine': n_b,
            'energy_norm_difference': energy_norm_difference(a.final, b.final),
            'strichartz_relative_change': abs(y_a - y_b) / y_b if y_b > 0 else 0.0,
        })

    payload = {'config_hash': config_hash, 'levels': rows, 'differences': differences}
    write_json(out / "sweep.json", payload)
    return {
        'success': True,
        'reason': ReasonCode.OK.value,
        **payload,
        'all_resolved': all(row['resolved'] for row in rows),
        'output_dir': str(out),
    }
