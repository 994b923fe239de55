"""
Time-sampled energy record of one run
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from dampwave.errors import DegenerateTraceError

COLUMNS = ("t", "E", "E1", "ut_l2sq", "diss_integral", "l10", "l12", "sm_defect")


@dataclass(frozen=True, eq=False)
class EnergyTrace:
    """
    Columns sampled at times t_i:

    E, E1          energy and higher-order energy
    ut_l2sq        ‖u_t‖²
    diss_integral  ∫₀ᵗ γ‖u_t‖² ds (γ = E for energy damping), trapezoid rule at step resolution
    l10, l12       ‖u‖_{L¹⁰}, ‖u‖_{L¹²}
    sm_defect      ⟨(S_m - I)u⁵, u_t⟩ for smooth-projector runs, 0 otherwise
    """
    times: np.ndarray
    energy: np.ndarray
    higher_energy: np.ndarray
    ut_l2sq: np.ndarray
    diss_integral: np.ndarray
    l10: np.ndarray
    l12: np.ndarray
    sm_defect: np.ndarray = field(default=None)

    def __post_init__(self):
        n = len(np.asarray(self.times))
        for name in ("times", "energy", "higher_energy", "ut_l2sq", "diss_integral", "l10", "l12", "sm_defect"):
            value = getattr(self, name)
            value = np.zeros(n) if value is None else np.array(value, dtype=float)
            if value.shape != (n,):
                raise DegenerateTraceError(f"trace column {name} has shape {value.shape}, expected ({n},)")
            if not np.all(np.isfinite(value)):
                raise DegenerateTraceError(f"trace column {name} has non-finite entries")
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if n == 0:
            raise DegenerateTraceError("empty trace")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise DegenerateTraceError("trace times must be strictly increasing")
        if np.any(self.energy < 0):
            raise DegenerateTraceError("trace energy must be nonnegative")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def cumulative_l10_5(self) -> np.ndarray:
        """∫₀ᵗ ‖u‖₁₀⁵ ds along the samples"""
        return cumulative_trapezoid(self.l10 ** 5, self.times, initial=0.0)

    @property
    def cumulative_l12_4(self) -> np.ndarray:
        """∫₀ᵗ ‖u‖₁₂⁴ ds along the samples"""
        return cumulative_trapezoid(self.l12 ** 4, self.times, initial=0.0)

    def columns(self) -> np.ndarray:
        """Rows in COLUMNS order"""
        return np.column_stack([
            self.times, self.energy, self.higher_energy, self.ut_l2sq,
            self.diss_integral, self.l10, self.l12, self.sm_defect,
        ])

    @classmethod
    def from_columns(cls, rows: np.ndarray) -> "EnergyTrace":
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if rows.shape[1] != len(COLUMNS):
            raise DegenerateTraceError(f"expected {len(COLUMNS)} columns, got {rows.shape[1]}")
        return cls(*(rows[:, i] for i in range(len(COLUMNS))))

    @classmethod
    def synthetic(cls, times, energy) -> "EnergyTrace":
        """Energy-only trace; the other columns are zero"""
        times = np.asarray(times, dtype=float)
        zeros = np.zeros_like(times)
        return cls(times, energy, zeros, zeros, zeros, zeros, zeros, zeros)

    def energy_at(self, t) -> np.ndarray:
        """E interpolated linearly between samples"""
        return np.interp(t, self.times, self.energy)


class TraceRecorder:
    """Row buffer filled by the integrator, frozen into an EnergyTrace at the end"""

    def __init__(self):
        self._rows: list[tuple[float, ...]] = []

    def record(self, t, energy, higher_energy, ut_l2sq, diss_integral, l10, l12, sm_defect=0.0):
        self._rows.append((t, energy, higher_energy, ut_l2sq, diss_integral, l10, l12, sm_defect))

    def __len__(self) -> int:
        return len(self._rows)

    def finish(self) -> EnergyTrace:
        return EnergyTrace.from_columns(np.array(self._rows, dtype=float))
