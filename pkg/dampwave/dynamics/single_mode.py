"""
Single-mode Balakrishnan-Taylor oscillator and the linear decay bounds.

    ẍ + λx + d·E(t)·ẋ = 0,   E = ½(ẋ² + λx²)

integrated with the same exact-substep splitting as the field equation.
Along exact solutions E' = -2dE·K with K = ½ẋ² <= E, so for d = 1
1/E grows at most like 2t, which gives the lower bound (1/E₀ + 2t)^{-1}.
"""
import math
from dataclasses import dataclass

import numpy as np

from dampwave.dynamics.galerkin import damping_factor
from dampwave.errors import DomainError

SUPPORTED_FUNCTIONALS = ("energy",)


@dataclass(frozen=True)
class BTParams:
    lam: float
    d: float = 1.0
    functional: str = "energy"

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"stiffness lambda must be positive, got {self.lam}")
        if self.d < 0:
            raise DomainError(f"damping coefficient d must be >= 0, got {self.d}")
        if self.functional not in SUPPORTED_FUNCTIONALS:
            raise DomainError(f"unsupported damping functional {self.functional!r}")

    def energy(self, x, xdot):
        return 0.5 * (np.square(xdot) + self.lam * np.square(x))


@dataclass(frozen=True, eq=False)
class ModeTrajectory:
    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    energy: np.ndarray


def single_mode_bt(
    params: BTParams,
    x0: float,
    xdot0: float,
    dt: float,
    duration: float,
    sample_stride: int = 1,
) -> ModeTrajectory:
    """Strang splitting D(dt/2) L(dt) D(dt/2) with exact rotation and exact damping"""
    if not dt > 0:
        raise DomainError(f"time step must be positive, got {dt}")
    omega = math.sqrt(params.lam)
    cos, sin = math.cos(omega * dt), math.sin(omega * dt)
    half = 0.5 * dt * params.d
    n_steps = max(1, math.ceil(duration / dt - 1e-9))

    def damp(x: float, xdot: float) -> float:
        return xdot * damping_factor(0.5 * params.lam * x * x, 0.5 * xdot * xdot, half)

    times, xs, xdots = [0.0], [x0], [xdot0]
    x, xdot = float(x0), float(xdot0)
    for n in range(1, n_steps + 1):
        xdot = damp(x, xdot)
        x, xdot = x * cos + xdot * sin / omega, -omega * x * sin + xdot * cos
        xdot = damp(x, xdot)
        if n % sample_stride == 0 or n == n_steps:
            times.append(n * dt)
            xs.append(x)
            xdots.append(xdot)

    xs, xdots = np.array(xs), np.array(xdots)
    return ModeTrajectory(np.array(times), xs, xdots, params.energy(xs, xdots))


def linear_lower_bound(energy0: float, t):
    """(1/E₀ + 2t)^{-1}: the energy cannot decay faster than this"""
    if not energy0 > 0:
        raise DomainError(f"initial energy must be positive, got {energy0}")
    return 1.0 / (1.0 / energy0 + 2.0 * np.asarray(t, dtype=float))


def linear_sandwich_bounds(energy0: float, mu: float, t):
    """((4t + 1/E₀)^{-1}, ((t-1)⁺/μ + 1/E₀)^{-1}); μ is fitted, never assumed"""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if not energy0 > 0:
        raise DomainError(f"initial energy must be positive, got {energy0}")
    t = np.asarray(t, dtype=float)
    lower = 1.0 / (4.0 * t + 1.0 / energy0)
    upper = 1.0 / (np.maximum(t - 1.0, 0.0) / mu + 1.0 / energy0)
    return lower, upper
