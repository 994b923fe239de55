"""
Discrete space-time norms, the bootstrap trap and slab partitions.

Spatial norms come from the trace (padding 3 quadrature; for r = 10, 12
this is an approximation, see quadrature_error_estimate).  Time
integrals use trapezoid weights over the samples.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import bisect

from dampwave.diagnostics.trace import EnergyTrace
from dampwave.errors import DegenerateTraceError, DomainError

BUDGET_RTOL = 1e-12


def _norm_column(trace: EnergyTrace, r: int) -> np.ndarray:
    if r == 10:
        return trace.l10
    if r == 12:
        return trace.l12
    raise DomainError(f"no L^{r} samples in the trace (available: 10, 12)")


def strichartz_norm(
    trace: Optional[EnergyTrace] = None,
    q: int = 5,
    r: int = 10,
    times: Optional[np.ndarray] = None,
    norms: Optional[np.ndarray] = None,
) -> float:
    """(Σ w_i ‖u(t_i)‖_r^q)^{1/q} with trapezoid weights w_i"""
    if trace is not None:
        times, norms = trace.times, _norm_column(trace, r)
    if times is None or norms is None:
        raise DegenerateTraceError("missing norm samples")
    times, norms = np.asarray(times, dtype=float), np.asarray(norms, dtype=float)
    if times.size < 2:
        return 0.0
    return float(trapezoid(norms ** q, times)) ** (1.0 / q)


@dataclass(frozen=True)
class StrichartzAccumulator:
    """Value of (∫_I ‖u‖_r^q)^{1/q}; the q-th powers add over disjoint intervals"""
    start: float
    end: float
    q: int
    r: int
    value: float

    @classmethod
    def over(cls, trace: EnergyTrace, q: int, r: int, start: float, end: float) -> "StrichartzAccumulator":
        mask = (trace.times >= start - 1e-12) & (trace.times <= end + 1e-12)
        value = strichartz_norm(None, q, r, trace.times[mask], _norm_column(trace, r)[mask])
        return cls(start, end, q, r, value)

    def combine(self, other: "StrichartzAccumulator") -> "StrichartzAccumulator":
        if (self.q, self.r) != (other.q, other.r):
            raise DomainError("cannot combine different norm pairs")
        if not (math.isclose(self.end, other.start) or math.isclose(other.end, self.start)):
            raise DomainError("intervals must be adjacent")
        value = (self.value ** self.q + other.value ** other.q) ** (1.0 / self.q)
        return StrichartzAccumulator(min(self.start, other.start), max(self.end, other.end), self.q, self.r, value)


@dataclass(frozen=True)
class BootstrapTrap:
    """y <= A₀ + C y⁵ confines y below ceiling whenever A₀ < threshold"""
    threshold: float
    ceiling: float
    y_peak: float


def bootstrap_trap(a0: float, c: float, xtol: float = 1e-15) -> Optional[BootstrapTrap]:
    """Smallest positive root of y = A₀ + C y⁵ by bisection on [0, y_peak], or None"""
    if not c > 0:
        raise DomainError(f"C must be positive, got {c}")
    if a0 < 0:
        raise DomainError(f"A0 must be >= 0, got {a0}")
    y_peak = (1.0 / (5.0 * c)) ** 0.25
    threshold = 0.8 * y_peak
    if a0 >= threshold:
        return None
    if a0 == 0.0:
        return BootstrapTrap(threshold, 0.0, y_peak)
    ceiling = bisect(lambda y: a0 + c * y ** 5 - y, 0.0, y_peak, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return BootstrapTrap(threshold, float(ceiling), y_peak)


@dataclass(frozen=True)
class Slab:
    start: float
    end: float
    increment: float
    irreducible: bool = False


def slab_partition(
    trace: Optional[EnergyTrace],
    delta: float,
    times: Optional[np.ndarray] = None,
    l10: Optional[np.ndarray] = None,
) -> list[Slab]:
    """
    Greedy partition into slabs whose (∫‖u‖₁₀⁵)^{1/5} stays below δ.

    The trajectory's own increment stands in for the free evolution.  A
    single sample interval that already reaches δ becomes its own slab,
    flagged irreducible.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if trace is not None:
        times, l10 = trace.times, trace.l10
    if times is None or l10 is None:
        raise DegenerateTraceError("slab partition needs L10 samples")
    times, l10 = np.asarray(times, dtype=float), np.asarray(l10, dtype=float)
    # running sums of equal pieces land a few ulps past δ⁵
    budget = delta ** 5 * (1.0 - BUDGET_RTOL)
    integrand = l10 ** 5
    pieces = 0.5 * np.diff(times) * (integrand[:-1] + integrand[1:])

    slabs: list[Slab] = []
    start, total = times[0], 0.0
    for i, piece in enumerate(pieces):
        if piece >= budget:
            if total > 0 or times[i] > start:
                slabs.append(Slab(float(start), float(times[i]), total ** 0.2))
            slabs.append(Slab(float(times[i]), float(times[i + 1]), piece ** 0.2, irreducible=True))
            start, total = times[i + 1], 0.0
            continue
        if total + piece >= budget:
            slabs.append(Slab(float(start), float(times[i]), total ** 0.2))
            start, total = times[i], 0.0
        total += piece
    if times[-1] > start or not slabs:
        slabs.append(Slab(float(start), float(times[-1]), total ** 0.2))
    return slabs
