"""
Decay studies and Nakao re-analysis of stored traces
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dampwave.diagnostics.decay import decay_fit, fit_sandwich_mu, lower_bound_violation
from dampwave.diagnostics.energy import first_increase
from dampwave.diagnostics.nakao import nakao_report
from dampwave.diagnostics.trace import EnergyTrace
from dampwave.dynamics.galerkin import DampingKind, simulate
from dampwave.dynamics.single_mode import BTParams, single_mode_bt
from dampwave.errors import DegenerateTraceError, DomainError, ReasonCode
from dampwave.logger import run_logger
from dampwave.models.params import ExperimentConfig
from dampwave.utils.initial_data import build_domain, build_initial_state, build_model, build_scheme
from dampwave.utils.persistence import TRACE_FILE, ensure_output_dir, read_trace, write_json, write_trace

DEFAULT_ENERGIES = (0.5, 1.0, 2.0)
LOWER_BOUND_SLACK = 1e-6
# the lower bound is a theorem for the linear prototypes only
ASSERTED_MODELS = ("bt", "linear")


def fit_window(config: ExperimentConfig, end: float) -> Tuple[float, float]:
    """run.fit_window, or the last 90% of the run"""
    if config.run.fit_window is not None:
        return float(config.run.fit_window[0]), float(config.run.fit_window[1])
    return 0.1 * end, end


def analyze_trace(trace: EnergyTrace, window: Tuple[float, float]) -> Dict[str, Any]:
    """Lower bound, fitted sandwich μ, Nakao chain and decay exponent of one trace"""
    energy0 = float(trace.energy[0])
    violation = lower_bound_violation(trace.times, trace.energy, energy0, LOWER_BOUND_SLACK)
    row: Dict[str, Any] = {
        'energy0': energy0,
        'final_energy': float(trace.energy[-1]),
        'monotone': first_increase(trace) is None,
        'lower_bound_holds': violation is None,
        'first_violation': None if violation is None else {
            'index': violation.index, 'time': violation.time,
            'energy': violation.energy, 'bound': violation.bound,
        },
        'sandwich_mu': None,
        'nakao': None,
        'decay_fit': None,
    }
    try:
        row['sandwich_mu'] = fit_sandwich_mu(trace.times, trace.energy, energy0)
    except DegenerateTraceError as e:
        run_logger.log_warning("sandwich_fit_skipped", str(e))
    try:
        row['nakao'] = nakao_report(trace).as_dict()
    except DegenerateTraceError as e:
        run_logger.log_warning("nakao_skipped", str(e))
    if window[1] <= trace.times[-1] + 1e-12:
        try:
            row['decay_fit'] = decay_fit(trace, window).as_dict()
        except (DegenerateTraceError, DomainError) as e:
            run_logger.log_warning("decay_fit_skipped", str(e), {"window": window})
    return row


def _bt_trace(config: ExperimentConfig, lam: float, energy0: float) -> EnergyTrace:
    """Single-mode oscillator started at rest with E = E₀"""
    trajectory = single_mode_bt(
        BTParams(lam=lam), math.sqrt(2.0 * energy0 / lam), 0.0,
        config.scheme.dt, config.run.duration, config.run.sample_stride,
    )
    return EnergyTrace.synthetic(trajectory.times, trajectory.energy)


def run_decay_study(config: ExperimentConfig) -> Dict[str, Any]:
    """
    Compare the single-mode oscillator, the damped linear field and the
    damped quintic field at every initial energy in run.energies.

    Args:
        config: Validated experiment configuration; the damping of its
            [model] section is replaced by energy-coefficient damping

    Returns:
        Dict with one row per (model, E₀) and the list of lower-bound
        violations of the linear prototypes
    """
    energies = list(config.run.energies) or list(DEFAULT_ENERGIES)
    domain = build_domain(config.domain)
    scheme = build_scheme(config.scheme)
    base = replace(build_model(config.model), damping=DampingKind.ENERGY)
    models = {'linear': replace(base, quintic=False), 'quintic': replace(base, quintic=True)}
    window = fit_window(config, config.run.duration)

    def pde_trace(name: str, energy0: float) -> EnergyTrace:
        model = models[name]
        initial = build_initial_state(config, domain, model, target_energy=energy0)
        run_logger.log_stage("decay-study", "member_start", {"model": name, "energy0": energy0})
        return simulate(initial, model, scheme, config.run.duration, config.run.sample_stride).trace

    jobs = [(name, e0) for e0 in energies for name in ('bt', 'linear', 'quintic')]
    with ThreadPoolExecutor(max_workers=config.run.workers) as pool:
        futures = [
            pool.submit(_bt_trace, config, domain.lambda_min, e0) if name == 'bt' else pool.submit(pde_trace, name, e0)
            for name, e0 in jobs
        ]
        traces = [future.result() for future in futures]

    out = ensure_output_dir(config.run.output_dir)
    config_hash = config.config_hash()
    rows: List[Dict[str, Any]] = []
    violations: List[Dict[str, Any]] = []
    for (name, e0), trace in zip(jobs, traces):
        write_trace(out / f"trace_{name}_E{e0:g}.csv", trace, config_hash)
        row = {'model': name, 'target_energy': e0, **analyze_trace(trace, window)}
        rows.append(row)
        if name in ASSERTED_MODELS and not row['lower_bound_holds']:
            violations.append({'model': name, 'target_energy': e0, **row['first_violation']})

    payload = {'config_hash': config_hash, 'fit_window': list(window), 'rows': rows, 'violations': violations}
    write_json(out / "decay_study.json", payload)
    success = not violations
    return {
        'success': success,
        'reason': (ReasonCode.OK if success else ReasonCode.INVARIANT_VIOLATION).value,
        **payload,
        'output_dir': str(out),
    }


def run_nakao(config: ExperimentConfig, trace_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Re-analyze a stored trace: windowed dissipation, C₁, envelope and decay fit.

    The trace's config hash must match the current config.

    Args:
        config: Validated experiment configuration
        trace_path: Trace file; defaults to trace.csv in run.output_dir

    Returns:
        Dict with the Nakao report, per-window table and decay fit
    """
    path = Path(trace_path) if trace_path else Path(config.run.output_dir) / TRACE_FILE
    trace, config_hash = read_trace(path, expected_hash=config.config_hash())
    report = nakao_report(trace)
    window = fit_window(config, float(trace.times[-1]))
    fit = None
    if window[1] <= trace.times[-1] + 1e-12:
        try:
            fit = decay_fit(trace, window).as_dict()
        except (DegenerateTraceError, DomainError) as e:
            run_logger.log_warning("decay_fit_skipped", str(e), {"window": window})

    payload = {
        'config_hash': config_hash,
        'trace': str(path),
        'nakao': report.as_dict(),
        'windows': [
            {'start': float(t), 'dissipation': float(d), 'supremum': float(s), 'envelope': float(e), 'measured': float(m)}
            for t, d, s, e, m in zip(
                report.starts, report.dissipation, report.suprema,
                report.envelope.values[:-1], report.measured[:-1])
        ],
        'decay_fit': fit,
    }
    out = ensure_output_dir(config.run.output_dir)
    write_json(out / "nakao.json", payload)
    return {
        'success': report.dominates,
        'reason': (ReasonCode.OK if report.dominates else ReasonCode.INVARIANT_VIOLATION).value,
        **payload,
        'output_dir': str(out),
    }
