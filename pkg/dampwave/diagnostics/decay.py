"""
Algebraic decay fits and the linear-prototype bounds checked against traces
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from dampwave.diagnostics.trace import EnergyTrace
from dampwave.dynamics.single_mode import linear_lower_bound
from dampwave.errors import DegenerateTraceError, DomainError


@dataclass(frozen=True)
class DecayFit:
    """
    E(t) ≈ constant · (t + τ)^α on [t_a, t_b].

    τ is profiled by bounded scalar minimisation of the log-space residual,
    so constant pairs with the shifted power law.  raw_exponent and
    raw_constant are the plain log E vs log t fit E ≈ C₀ t^α (τ = 0).
    """
    t_a: float
    t_b: float
    exponent: float
    constant: float
    offset: float
    residual: float
    raw_exponent: float
    raw_constant: float

    def as_dict(self) -> dict:
        return {
            "window": [self.t_a, self.t_b],
            "exponent": self.exponent,
            "constant": self.constant,
            "offset": self.offset,
            "residual": self.residual,
            "raw_exponent": self.raw_exponent,
            "raw_constant": self.raw_constant,
        }


def _loglog(times: np.ndarray, log_e: np.ndarray, offset: float) -> tuple[float, float, float]:
    x = np.log(times + offset)
    slope, intercept = np.polyfit(x, log_e, 1)
    rms = float(np.sqrt(np.mean((log_e - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), rms


def decay_fit(trace: EnergyTrace, window: tuple[float, float]) -> DecayFit:
    t_a, t_b = float(window[0]), float(window[1])
    if not (0 < t_a < t_b):
        raise DomainError(f"fit window must satisfy 0 < t_a < t_b, got {window}")
    if t_a < trace.times[0] - 1e-12 or t_b > trace.times[-1] + 1e-12:
        raise DomainError(f"fit window {window} exceeds the trace")
    mask = (trace.times >= t_a - 1e-12) & (trace.times <= t_b + 1e-12)
    times, energy = trace.times[mask], trace.energy[mask]
    if times.size < 3:
        raise DegenerateTraceError("decay fit needs at least three samples in the window")
    if np.any(energy <= 0):
        raise DegenerateTraceError("decay fit needs E > 0 on the window")
    log_e = np.log(energy)

    raw_slope, raw_intercept, raw_rms = _loglog(times, log_e, 0.0)
    best = minimize_scalar(
        lambda tau: _loglog(times, log_e, tau)[2],
        bounds=(-0.5 * t_a, t_a), method="bounded", options={"xatol": 1e-10},
    )
    offset = float(best.x)
    slope, intercept, rms = _loglog(times, log_e, offset)
    if raw_rms <= rms:
        offset, slope, intercept, rms = 0.0, raw_slope, raw_intercept, raw_rms
    return DecayFit(t_a, t_b, slope, math.exp(intercept), offset, rms, raw_slope, math.exp(raw_intercept))


def fit_sandwich_mu(times, energy, energy0: float) -> float:
    """Smallest μ with E(t) <= ((t-1)⁺/μ + 1/E₀)^{-1} at every sample"""
    times, energy = np.asarray(times, dtype=float), np.asarray(energy, dtype=float)
    late = times > 1.0
    if not np.any(late):
        raise DegenerateTraceError("sandwich fit needs samples beyond t = 1")
    gap = 1.0 / energy[late] - 1.0 / energy0
    if np.any(gap <= 0):
        return math.inf
    return float(np.max((times[late] - 1.0) / gap))


@dataclass(frozen=True)
class BoundViolation:
    index: int
    time: float
    energy: float
    bound: float


def lower_bound_violation(times, energy, energy0: float, slack: float = 1e-6) -> Optional[BoundViolation]:
    """First sample with E(t_i) < (1/E₀ + 2t_i)^{-1}(1 - slack), or None"""
    times, energy = np.asarray(times, dtype=float), np.asarray(energy, dtype=float)
    bound = linear_lower_bound(energy0, times - times[0])
    bad = np.nonzero(energy < bound * (1.0 - slack))[0]
    if bad.size == 0:
        return None
    i = int(bad[0])
    return BoundViolation(i, float(times[i]), float(energy[i]), float(bound[i]))
