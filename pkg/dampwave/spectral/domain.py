"""
Dirichlet spectral calculus on rectangular boxes.

The eigenfunctions of -Δ with homogeneous Dirichlet conditions on
Ω = Π [0, L_i] are products of sines.  Each 1D factor is normalized,

    φ_k(x) = √(2/L) sin(kπx/L),

so the basis is orthonormal in L² and every Parseval constant equals 1.

Physical samples live on the interior tensor grid x_j = j·L/(M+1),
j = 1..M, with M = padding·N points per axis.  Boundary values are never
stored, so u|∂Ω = 0 holds structurally.  The discrete sine transform of
type I maps between the two representations; scipy's pocketfft backend
supports every length, so any N ≥ 4 and any padding are accepted
(powers of two are fastest).

Quadrature uses the interior rule h^d Σ_j f(x_j), h_i = L_i/(M+1).  For
f = |u|^p with even p and u of degree N it is exact as long as
p·N < 2(M+1); in particular padding 3 integrates u⁶ exactly and removes
all aliasing from the projection of u⁵.  For p = 10, 12 and for odd p it is
an approximation whose error shrinks with the padding.
"""
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from scipy import fft

from dampwave.errors import DomainError

ModeIndex = tuple[int, ...]

MIN_MODES = 4


@dataclass(frozen=True)
class BoxDomain:
    """Box [0, L_1] x ... x [0, L_d] truncated at N sine modes per axis"""
    dimension: int
    modes: int
    lengths: tuple[float, ...] = ()

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise DomainError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if self.modes < MIN_MODES:
            raise DomainError(f"modes per axis must be >= {MIN_MODES}, got {self.modes}")
        lengths = tuple(float(x) for x in self.lengths) or (math.pi,) * self.dimension
        if len(lengths) != self.dimension:
            raise DomainError(
                f"expected {self.dimension} edge lengths, got {len(lengths)}")
        if any(not (x > 0 and math.isfinite(x)) for x in lengths):
            raise DomainError(f"edge lengths must be positive, got {lengths}")
        object.__setattr__(self, "lengths", lengths)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.modes,) * self.dimension

    @property
    def volume(self) -> float:
        return math.prod(self.lengths)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """λ_k² on the full index grid, read-only"""
        total = np.zeros(self.shape)
        k = np.arange(1, self.modes + 1, dtype=float)
        for axis, length in enumerate(self.lengths):
            view = [1] * self.dimension
            view[axis] = self.modes
            total = total + ((k * math.pi / length) ** 2).reshape(view)
        total.setflags(write=False)
        return total

    @cached_property
    def frequencies(self) -> np.ndarray:
        """λ_k = √(λ_k²), the scale spectral multipliers compare against"""
        lam = np.sqrt(self.eigenvalues)
        lam.setflags(write=False)
        return lam

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues.flat[0])

    @property
    def lambda_max(self) -> float:
        return float(self.frequencies.flat[-1])

    def grid_size(self, padding: int) -> int:
        if int(padding) != padding or padding < 1:
            raise DomainError(f"padding must be a positive integer, got {padding}")
        return int(padding) * self.modes

    def grid(self, padding: int = 1) -> list[np.ndarray]:
        """Interior sample points per axis"""
        size = self.grid_size(padding)
        j = np.arange(1, size + 1, dtype=float)
        return [j * length / (size + 1) for length in self.lengths]

    def cell_volume(self, padding: int) -> float:
        size = self.grid_size(padding)
        return math.prod(length / (size + 1) for length in self.lengths)

    def _transform_scale(self) -> float:
        # scipy's unnormalized DST-I carries a factor 2 per axis
        return math.prod(1.0 / math.sqrt(2.0 * length) for length in self.lengths)


def eigenvalue(domain: BoxDomain, k: Sequence[int]) -> float:
    """λ_k² = Σ_i (k_i π / L_i)² for a multi-index inside the truncation"""
    k = tuple(int(x) for x in k)
    if len(k) != domain.dimension:
        raise DomainError(f"mode index {k} does not match dimension {domain.dimension}")
    if any(x < 1 or x > domain.modes for x in k):
        raise DomainError(f"mode index {k} outside 1..{domain.modes}")
    return sum((ki * math.pi / length) ** 2 for ki, length in zip(k, domain.lengths))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Real sine coefficients c_k over the domain's index grid"""
    domain: BoxDomain
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        if coeffs.shape != self.domain.shape:
            raise DomainError(
                f"coefficient shape {coeffs.shape} does not match domain {self.domain.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zeros(cls, domain: BoxDomain) -> "SpectralField":
        return cls(domain, np.zeros(domain.shape))

    @classmethod
    def mode(cls, domain: BoxDomain, k: Sequence[int], amplitude: float = 1.0) -> "SpectralField":
        """amplitude · φ_k"""
        eigenvalue(domain, k)
        coeffs = np.zeros(domain.shape)
        coeffs[tuple(int(x) - 1 for x in k)] = amplitude
        return cls(domain, coeffs)

    def with_coefficients(self, coefficients: np.ndarray) -> "SpectralField":
        return SpectralField(self.domain, coefficients)

    def _check(self, other: "SpectralField") -> None:
        if other.domain != self.domain:
            raise DomainError("fields live on different domains")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return self.with_coefficients(self.coefficients + other.coefficients)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return self.with_coefficients(self.coefficients - other.coefficients)

    def __neg__(self) -> "SpectralField":
        return self.with_coefficients(-self.coefficients)

    def scaled(self, factor: float) -> "SpectralField":
        return self.with_coefficients(factor * self.coefficients)

    def inner(self, other: "SpectralField") -> float:
        """L² inner product (Parseval)"""
        self._check(other)
        return float(np.dot(self.coefficients.ravel(), other.coefficients.ravel()))

    def l2_norm_sq(self) -> float:
        return self.inner(self)

    def l2_norm(self) -> float:
        return math.sqrt(self.l2_norm_sq())

    def gradient_norm_sq(self) -> float:
        """‖∇f‖² = Σ λ_k² c_k²"""
        c = self.coefficients.ravel()
        return float(np.dot(self.domain.eigenvalues.ravel() * c, c))

    def sobolev_norm_sq(self, s: float) -> float:
        """Σ (1 + λ_k²)^s c_k²"""
        c = self.coefficients.ravel()
        weights = (1.0 + self.domain.eigenvalues.ravel()) ** s
        return float(np.dot(weights * c, c))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coefficients)))

    def embed(self, target: BoxDomain) -> "SpectralField":
        """Zero-extend or truncate onto a domain with the same box and another N"""
        if target.dimension != self.domain.dimension or target.lengths != self.domain.lengths:
            raise DomainError("embedding requires the same box")
        coeffs = np.zeros(target.shape)
        n = min(target.modes, self.domain.modes)
        window = (slice(0, n),) * target.dimension
        coeffs[window] = self.coefficients[window]
        return SpectralField(target, coeffs)


@dataclass(frozen=True, eq=False)
class PhysicalField:
    """Samples on the interior grid of resolution padding·N per axis"""
    domain: BoxDomain
    values: np.ndarray = field(repr=False)
    padding: int = 1

    def __post_init__(self):
        size = self.domain.grid_size(self.padding)
        values = np.array(self.values, dtype=float)
        if values.shape != (size,) * self.domain.dimension:
            raise DomainError(
                f"sample shape {values.shape} does not match padded grid of size {size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def to_physical(f: SpectralField, padding: int = 1) -> PhysicalField:
    """Evaluate Σ c_k φ_k on the padded interior grid"""
    domain = f.domain
    size = domain.grid_size(padding)
    padded = np.zeros((size,) * domain.dimension)
    padded[(slice(0, domain.modes),) * domain.dimension] = f.coefficients
    values = fft.dstn(padded, type=1) * domain._transform_scale()
    return PhysicalField(domain, values, int(padding))


def to_spectral(g: PhysicalField) -> SpectralField:
    """Discrete L² projection of samples onto the first N modes per axis"""
    domain = g.domain
    coeffs = fft.idstn(g.values, type=1) / domain._transform_scale()
    return SpectralField(domain, coeffs[(slice(0, domain.modes),) * domain.dimension])


def project_function(domain: BoxDomain, func, padding: int = 4) -> SpectralField:
    """Project a callable f(x_1, ..., x_d) by sampling it on the padded grid"""
    axes = np.meshgrid(*domain.grid(padding), indexing="ij")
    values = np.asarray(func(*axes), dtype=float)
    return to_spectral(PhysicalField(domain, values, padding))


def integrate(g: PhysicalField) -> float:
    """Interior quadrature h^d Σ g(x_j)"""
    return float(np.sum(g.values)) * g.domain.cell_volume(g.padding)


def lp_norm(f: Union[SpectralField, PhysicalField], p: float, padding: int = 3) -> float:
    """(∫|f|^p dx)^{1/p} by interior quadrature on the padded grid"""
    if p < 1:
        raise DomainError(f"lp_norm requires p >= 1, got {p}")
    g = f if isinstance(f, PhysicalField) else to_physical(f, padding)
    integral = float(np.sum(np.abs(g.values) ** p)) * g.domain.cell_volume(g.padding)
    return integral ** (1.0 / p)


def apply_laplacian(f: SpectralField) -> SpectralField:
    """-Δf as a positive operator: coefficients λ_k² c_k"""
    return f.with_coefficients(f.domain.eigenvalues * f.coefficients)


def random_field(
    domain: BoxDomain,
    rng: np.random.Generator,
    band: int = 0,
    smoothness: float = 0.0,
) -> SpectralField:
    """Gaussian coefficients on modes with every k_i <= band, damped by (1+λ²)^{-smoothness/2}"""
    band = domain.modes if band <= 0 else min(band, domain.modes)
    coeffs = np.zeros(domain.shape)
    window = (slice(0, band),) * domain.dimension
    coeffs[window] = rng.standard_normal((band,) * domain.dimension)
    coeffs *= (1.0 + domain.eigenvalues) ** (-smoothness / 2.0)
    return SpectralField(domain, coeffs)
