"""
Windowed dissipation and the difference inequality

    sup_{[t,t+1]} E² <= C₁ (E(t) - E(t+1)) = C₁ D(t)²

together with the worst-case envelope it implies, Ē_{n+1} + Ē_{n+1}²/C₁ = Ē_n,
which decays like 1/n.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dampwave.diagnostics.trace import EnergyTrace
from dampwave.errors import DegenerateTraceError, DomainError

WINDOW = 1.0
DEGENERATE_FLOOR = 1e-14


def nakao_window(trace: EnergyTrace, t: float, length: float = WINDOW) -> float:
    """D(t)² = E(t) - E(t+1), endpoints interpolated linearly"""
    if t < trace.times[0] - 1e-12 or t + length > trace.times[-1] + 1e-12:
        raise DegenerateTraceError(
            f"window [{t}, {t + length}] exceeds trace [{trace.times[0]}, {trace.times[-1]}]")
    return float(trace.energy_at(t) - trace.energy_at(t + length))


def window_supremum(trace: EnergyTrace, t: float, length: float = WINDOW) -> float:
    """sup of E over [t, t+1]: interpolated endpoints and interior samples"""
    inside = (trace.times > t) & (trace.times < t + length)
    candidates = [trace.energy_at(t), trace.energy_at(t + length)]
    if np.any(inside):
        candidates.append(np.max(trace.energy[inside]))
    return float(max(candidates))


def window_starts(trace: EnergyTrace, length: float = WINDOW) -> np.ndarray:
    count = int(math.floor((trace.duration + 1e-9) / length))
    return trace.times[0] + length * np.arange(count)


@dataclass(frozen=True)
class InequalityFit:
    constant: float
    used: np.ndarray
    ratios: np.ndarray


def _window_table(trace: EnergyTrace, length: float):
    starts = window_starts(trace, length)
    dissipation = np.array([nakao_window(trace, t, length) for t in starts])
    suprema = np.array([window_supremum(trace, t, length) for t in starts])
    return starts, dissipation, suprema


def nakao_inequality_constant(trace: EnergyTrace, floor: float = DEGENERATE_FLOOR, length: float = WINDOW) -> float:
    """C₁ = max over windows of sup E² / D², windows with D² < floor·E(0) excluded"""
    return _fit_inequality(trace, floor, length).constant


def _fit_inequality(trace: EnergyTrace, floor: float, length: float) -> InequalityFit:
    starts, dissipation, suprema = _window_table(trace, length)
    used = dissipation >= floor * trace.energy[0]
    if starts.size == 0 or not np.any(used) or trace.energy[0] <= 0:
        raise DegenerateTraceError("every dissipation window is degenerate")
    ratios = np.full(starts.shape, np.nan)
    ratios[used] = suprema[used] ** 2 / dissipation[used]
    return InequalityFit(float(np.nanmax(ratios)), used, ratios)


@dataclass(frozen=True)
class NakaoEnvelope:
    values: np.ndarray
    decay_constant: float

    def __len__(self) -> int:
        return len(self.values)


def nakao_envelope(energy0: float, c1: float, windows: int) -> NakaoEnvelope:
    """
    Ē₀ = E₀ and Ē_{n+1} the positive root of x + x²/C₁ = Ē_n.

    decay_constant is max_{n>=1} n·Ē_n over the computed range.
    """
    if energy0 < 0:
        raise DomainError(f"initial energy must be >= 0, got {energy0}")
    if not c1 > 0:
        raise DomainError(f"C1 must be positive, got {c1}")
    if windows < 0:
        raise DomainError(f"window count must be >= 0, got {windows}")
    values = np.empty(windows + 1)
    values[0] = energy0
    for n in range(windows):
        # 2Ē/(1 + √(1 + 4Ē/C₁)) is the quadratic root without cancellation
        values[n + 1] = 2.0 * values[n] / (1.0 + math.sqrt(1.0 + 4.0 * values[n] / c1))
    n = np.arange(1, windows + 1)
    decay_constant = float(np.max(n * values[1:])) if windows else 0.0
    return NakaoEnvelope(values, decay_constant)


@dataclass(frozen=True)
class NakaoReport:
    starts: np.ndarray
    dissipation: np.ndarray
    suprema: np.ndarray
    c1: float
    envelope: NakaoEnvelope
    measured: np.ndarray

    @property
    def margin(self) -> float:
        """min_n (Ē_n - E(t₀+n)); nonnegative when the envelope dominates"""
        return float(np.min(self.envelope.values - self.measured))

    @property
    def dominates(self) -> bool:
        return bool(self.margin >= -1e-12 * max(float(self.measured[0]), 1e-300))

    def as_dict(self) -> dict:
        return {
            "c1": float(self.c1),
            "windows": int(self.starts.size),
            "envelope_margin": self.margin,
            "envelope_dominates": self.dominates,
            "envelope_decay_constant": float(self.envelope.decay_constant),
            "min_dissipation": float(np.min(self.dissipation)) if self.dissipation.size else 0.0,
        }


def nakao_report(
    trace: EnergyTrace,
    floor: float = DEGENERATE_FLOOR,
    length: float = WINDOW,
    c1: Optional[float] = None,
) -> NakaoReport:
    """Full chain: windows, C₁ (measured unless given), envelope from E(t₀), dominance"""
    starts, dissipation, suprema = _window_table(trace, length)
    if c1 is None:
        c1 = _fit_inequality(trace, floor, length).constant
    measured = trace.energy_at(np.append(starts, starts[-1] + length if starts.size else trace.times[0]))
    envelope = nakao_envelope(float(measured[0]), c1, starts.size)
    return NakaoReport(starts, dissipation, suprema, c1, envelope, measured)
