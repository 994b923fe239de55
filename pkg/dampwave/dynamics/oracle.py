"""
High-precision reference for small 1D mode systems.

The quintic projection ⟨u⁵, φ_j⟩ is evaluated from the exact sextic
integrals ∫₀ᴸ φ_{k1}···φ_{k6} dx, expanded with sin a = (e^{ia} - e^{-ia})/2i:
only sign patterns with Σ sᵢkᵢ = 0 survive integration over a full
half-period.  The resulting 2m-dimensional ODE is integrated with DOP853
at tight tolerances and compared with the split-step integrator.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from dampwave.dynamics.galerkin import DampingKind, ModelConfig, State
from dampwave.errors import DomainError
from dampwave.spectral.domain import BoxDomain

MAX_ORACLE_MODES = 8


def sextic_tensor(modes: int, length: float = math.pi) -> np.ndarray:
    """T[k1..k6] = ∫₀ᴸ Π φ_{kᵢ} dx for orthonormal 1D sines, indices 0-based"""
    k = np.arange(1, modes + 1)
    grids = np.meshgrid(*([k] * 6), indexing="ij")
    total = np.zeros((modes,) * 6)
    for signs in itertools.product((1, -1), repeat=6):
        phase = sum(s * g for s, g in zip(signs, grids))
        total += np.prod(signs) * (phase == 0)
    # (2i)^6 = -64; ∫₀^π dy = π; dx = L/π dy; six factors √(2/L)
    return total * (-1.0 / 64.0) * length * (2.0 / length) ** 3


@dataclass(frozen=True)
class ModeSystem:
    """u'' = -λ²u - N(u) - γ u' on the first m modes of a 1D box"""
    domain: BoxDomain
    config: ModelConfig
    tensor: np.ndarray

    @classmethod
    def build(cls, domain: BoxDomain, config: ModelConfig) -> "ModeSystem":
        if domain.dimension != 1:
            raise DomainError("the reference oracle supports 1D domains only")
        if domain.modes > MAX_ORACLE_MODES:
            raise DomainError(
                f"reference oracle is limited to {MAX_ORACLE_MODES} modes, got {domain.modes}")
        if config.projector is not None:
            raise DomainError("the reference oracle integrates the unprojected N-mode system")
        return cls(domain, config, sextic_tensor(domain.modes, domain.lengths[0]))

    def quintic(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("jabcde,a,b,c,d,e->j", self.tensor, u, u, u, u, u, optimize=True)

    def energy(self, u: np.ndarray, v: np.ndarray) -> float:
        lam2 = self.domain.eigenvalues
        energy = 0.5 * float(np.dot(lam2 * u, u) + np.dot(v, v))
        if self.config.include_potential:
            energy += float(np.dot(u, self.quintic(u))) / 6.0
        return energy

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        m = self.domain.modes
        u, v = y[:m], y[m:]
        accel = -self.domain.eigenvalues * u
        if self.config.quintic:
            accel = accel - self.quintic(u)
        if self.config.damping is DampingKind.ENERGY:
            accel = accel - self.energy(u, v) * v
        elif self.config.damping is DampingKind.CONSTANT:
            accel = accel - self.config.damping_constant * v
        return np.concatenate([v, accel])


def reference_solution(
    system: ModeSystem,
    initial: State,
    times: np.ndarray,
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> np.ndarray:
    """Rows [u, v] of the DOP853 solution at the requested times"""
    y0 = np.concatenate([initial.u.coefficients, initial.v.coefficients])
    times = np.asarray(times, dtype=float)
    sol = solve_ivp(
        system.rhs, (float(times[0]), float(times[-1])), y0,
        method="DOP853", t_eval=times, rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise DomainError(f"reference integration failed: {sol.message}")
    return sol.y.T
