"""
Sharp and smooth spectral cutoffs.

A multiplier acts diagonally on the sine basis, c_k <- w_k c_k, with

    Sharp(m):  w_k = 1 if λ_k <= m else 0     (the Galerkin projector)
    Smooth(m): w_k = χ(λ_k / m)               (Littlewood-Paley type cutoff)

The property checks below are the measurable counterparts of the basic
multiplier lemmas: L² contraction, commutation with -Δ, regularization
at scale m, strong convergence as m grows and empirical Lᵖ ratios.  The
Lᵖ unboundedness of sharp projectors is not observable at fixed
resolution; their ratios are tabulated for comparison only.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from dampwave.errors import DomainError
from dampwave.spectral.domain import (
    BoxDomain,
    SpectralField,
    apply_laplacian,
    lp_norm,
    random_field,
)


def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    positive = t > 0
    out[positive] = np.exp(-1.0 / t[positive])
    return out


class CutoffProfile:
    """
    Even C^∞ cutoff χ with χ = 1 on |s| <= 1 and χ = 0 on |s| >= 2.

    On 1 < |s| < 2, χ(s) = ψ(2-|s|) / (ψ(2-|s|) + ψ(|s|-1)) with
    ψ(t) = exp(-1/t) for t > 0 and 0 otherwise.
    """

    def __call__(self, s):
        s = np.abs(np.asarray(s, dtype=float))
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        out = np.where(s <= 1.0, 1.0, 0.0)
        ramp = (s > 1.0) & (s < 2.0)
        if np.any(ramp):
            a = _psi(2.0 - s[ramp])
            b = _psi(s[ramp] - 1.0)
            out[ramp] = a / (a + b)
        return float(out[0]) if scalar else out

    def __eq__(self, other) -> bool:
        return isinstance(other, CutoffProfile)

    def __hash__(self) -> int:
        return hash(CutoffProfile)

    def __repr__(self) -> str:
        return "CutoffProfile()"


class MultiplierKind(str, Enum):
    SHARP = "sharp"
    SMOOTH = "smooth"


@dataclass(frozen=True)
class MultiplierSpec:
    kind: MultiplierKind
    level: float
    profile: CutoffProfile = field(default_factory=CutoffProfile)

    def __post_init__(self):
        object.__setattr__(self, "kind", MultiplierKind(self.kind))
        if not (self.level > 0 and math.isfinite(self.level)):
            raise DomainError(f"multiplier level must be positive, got {self.level}")

    @classmethod
    def sharp(cls, level: float) -> "MultiplierSpec":
        return cls(MultiplierKind.SHARP, level)

    @classmethod
    def smooth(cls, level: float) -> "MultiplierSpec":
        return cls(MultiplierKind.SMOOTH, level)

    def weights(self, domain: BoxDomain) -> np.ndarray:
        lam = domain.frequencies
        if self.kind is MultiplierKind.SHARP:
            return (lam <= self.level).astype(float)
        return self.profile(lam / self.level).reshape(lam.shape)


def apply_multiplier(spec: MultiplierSpec, f: SpectralField) -> SpectralField:
    return f.with_coefficients(spec.weights(f.domain) * f.coefficients)


def l2_contraction_defect(spec: MultiplierSpec, samples: Iterable[SpectralField]) -> float:
    """max ‖S v‖₂ / ‖v‖₂ over the samples"""
    worst = 0.0
    for v in samples:
        norm = v.l2_norm()
        if norm == 0.0:
            raise DomainError("contraction ratio is undefined for a zero sample")
        worst = max(worst, apply_multiplier(spec, v).l2_norm() / norm)
    return worst


def commutation_defect(
    spec: MultiplierSpec,
    samples: Iterable[SpectralField],
    relative: bool = False,
) -> float:
    """max ‖-Δ(S v) - S(-Δv)‖₂, optionally divided by ‖-Δv‖₂"""
    worst = 0.0
    for v in samples:
        lap_v = apply_laplacian(v)
        defect = (apply_laplacian(apply_multiplier(spec, v)) - apply_multiplier(spec, lap_v)).l2_norm()
        if relative:
            scale = lap_v.l2_norm()
            defect = defect / scale if scale > 0 else 0.0
        worst = max(worst, defect)
    return worst


def regularization_ratio(spec: MultiplierSpec, s: float, samples: Iterable[SpectralField]) -> float:
    """max ‖S v‖_{H^s} / (m^s ‖v‖₂), H^s weight (1 + λ²)^s"""
    if spec.kind is not MultiplierKind.SMOOTH:
        raise DomainError("regularization ratio is defined for smooth multipliers")
    if s < 0:
        raise DomainError(f"regularization order must be >= 0, got {s}")
    worst = 0.0
    for v in samples:
        norm = v.l2_norm()
        if norm == 0.0:
            raise DomainError("regularization ratio is undefined for a zero sample")
        sv = apply_multiplier(spec, v)
        worst = max(worst, math.sqrt(sv.sobolev_norm_sq(s)) / (spec.level ** s * norm))
    return worst


def convergence_defect(
    v: SpectralField,
    levels: Sequence[float],
    kind: MultiplierKind = MultiplierKind.SMOOTH,
) -> list[float]:
    """‖S_m v - v‖₂ for each m in levels"""
    return [(apply_multiplier(MultiplierSpec(kind, m), v) - v).l2_norm() for m in levels]


def lp_operator_ratio(
    spec: MultiplierSpec,
    domain: BoxDomain,
    p: float,
    sample_count: int,
    seed: int,
    padding: int = 3,
    smoothness: float = 0.0,
) -> float:
    """Empirical max ‖S v‖_p / ‖v‖_p over seeded random fields"""
    if not 1 < p < math.inf:
        raise DomainError(f"Lp ratio requires 1 < p < inf, got {p}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sample_count):
        v = random_field(domain, rng, smoothness=smoothness)
        worst = max(worst, lp_norm(apply_multiplier(spec, v), p, padding) / lp_norm(v, p, padding))
    return worst


def basis_samples(domain: BoxDomain, limit: Optional[int] = None) -> list[SpectralField]:
    """Single-mode fields φ_k in index order, the extremal samples for diagonal multipliers"""
    samples = []
    for flat in range(int(np.prod(domain.shape))):
        if limit is not None and flat >= limit:
            break
        k = tuple(int(i) + 1 for i in np.unravel_index(flat, domain.shape))
        samples.append(SpectralField.mode(domain, k))
    return samples
