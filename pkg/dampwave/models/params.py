"""
Pydantic models for experiment configuration, tool parameters and run summaries
"""
import hashlib
import json
import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _split_list(value):
    """Accept "a, b, c" from config files as a list"""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class DomainParams(BaseModel):
    """Box geometry and truncation"""
    model_config = ConfigDict(extra="forbid")

    dimension: int = Field(default=1, ge=1, le=3, description="Spatial dimension d")
    lengths: list[float] = Field(default_factory=list, description="Edge lengths; empty means π on every axis")
    modes: int = Field(default=64, ge=4, description="Sine modes per axis N")

    _lengths_list = field_validator("lengths", mode="before")(_split_list)

    @field_validator("lengths")
    @classmethod
    def _positive_lengths(cls, value: list[float]) -> list[float]:
        if any(not (x > 0 and math.isfinite(x)) for x in value):
            raise ValueError("edge lengths must be positive and finite")
        return value

    @model_validator(mode="after")
    def _lengths_match_dimension(self):
        if self.lengths and len(self.lengths) != self.dimension:
            raise ValueError(f"expected {self.dimension} edge lengths, got {len(self.lengths)}")
        return self


class ModelParams(BaseModel):
    """Equation terms and approximation scheme"""
    model_config = ConfigDict(extra="forbid")

    quintic: bool = Field(default=True, description="Include the u⁵ term")
    damping: Literal["energy", "none", "constant"] = Field(default="energy")
    damping_constant: float = Field(default=0.0, ge=0.0)
    projector: Literal["none", "sharp", "smooth"] = Field(
        default="none", description="Projector applied to u⁵ and to the initial data")
    projector_level: Optional[float] = Field(default=None, gt=0.0, description="Spectral scale m")
    potential_in_energy: Optional[bool] = Field(
        default=None, description="Whether ⅙‖u‖₆⁶ enters E; unset follows the quintic switch")
    padding: int = Field(default=3, ge=1, le=8)

    @model_validator(mode="after")
    def _level_required(self):
        if self.projector != "none" and self.projector_level is None:
            raise ValueError("projector_level is required for sharp and smooth projectors")
        return self


class SchemeParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: float = Field(default=1e-3, gt=0.0)
    energy_growth_tolerance: float = Field(default=1e-3, gt=0.0)


class RunParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    duration: float = Field(default=10.0, gt=0.0, description="Final time T")
    sample_stride: int = Field(default=10, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    output_dir: str = Field(default="runs/latest")
    fit_window: Optional[list[float]] = Field(default=None, description="Decay fit window [t_a, t_b]")
    levels: list[int] = Field(default_factory=list, description="Modes per axis for sweep-m")
    energies: list[float] = Field(default_factory=list, description="Initial energies for decay-study")
    workers: int = Field(default=1, ge=1, description="Concurrent member runs in sweeps")

    _lists = field_validator("fit_window", "levels", "energies", mode="before")(_split_list)

    @field_validator("fit_window")
    @classmethod
    def _window(cls, value: Optional[list[float]]) -> Optional[list[float]]:
        if value is not None and (len(value) != 2 or not 0 < value[0] < value[1]):
            raise ValueError("fit_window must be [t_a, t_b] with 0 < t_a < t_b")
        return value

    @field_validator("levels")
    @classmethod
    def _increasing(cls, value: list[int]) -> list[int]:
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("levels must be strictly increasing")
        if any(level < 4 for level in value):
            raise ValueError("levels must be >= 4")
        return value


class InitialDataParams(BaseModel):
    """
    kind = zero    rest state
    kind = modes   explicit list "k1,k2:u_amp:v_amp; ..."
    kind = bump    smooth compactly supported bump in u (optional velocity amplitude)
    kind = random  seeded Gaussian band-limited data, rescaled to target_energy
    """
    model_config = ConfigDict(extra="forbid")

    kind: Literal["zero", "modes", "bump", "random"] = Field(default="random")
    modes: str = Field(default="", description="Mode list for kind = modes")
    center: list[float] = Field(default_factory=list, description="Bump center; empty means box center")
    width: float = Field(default=0.5, gt=0.0)
    amplitude: float = Field(default=1.0)
    velocity_amplitude: float = Field(default=0.0)
    band: int = Field(default=8, ge=1, description="Highest mode per axis for random data")
    smoothness: float = Field(default=1.0, ge=0.0)
    target_energy: Optional[float] = Field(default=None, gt=0.0)

    _center_list = field_validator("center", mode="before")(_split_list)

    @field_validator("modes")
    @classmethod
    def _parse_modes(cls, value: str) -> str:
        parse_mode_list(value)
        return value


def parse_mode_list(text: str) -> list[tuple[tuple[int, ...], float, float]]:
    """'1:0.5:0; 2,1:0.1:0.2' -> [((1,), 0.5, 0.0), ((2, 1), 0.1, 0.2)]"""
    entries = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = [p.strip() for p in chunk.split(":")]
        if len(parts) not in (2, 3):
            raise ValueError(f"mode entry {chunk!r} must be 'k:u_amp[:v_amp]'")
        index = tuple(int(k) for k in parts[0].split(","))
        entries.append((index, float(parts[1]), float(parts[2]) if len(parts) == 3 else 0.0))
    return entries


class ExperimentConfig(BaseModel):
    """Validated experiment configuration; unknown keys are errors"""
    model_config = ConfigDict(extra="forbid")

    domain: DomainParams = Field(default_factory=DomainParams)
    model: ModelParams = Field(default_factory=ModelParams)
    scheme: SchemeParams = Field(default_factory=SchemeParams)
    run: RunParams = Field(default_factory=RunParams)
    initial: InitialDataParams = Field(default_factory=InitialDataParams)

    @model_validator(mode="after")
    def _seed_for_random(self):
        if self.initial.kind == "random" and self.run.seed is None:
            raise ValueError("run.seed is mandatory for random initial data")
        return self

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form; output_dir does not enter the hash"""
        payload = self.model_dump(mode="json")
        payload["run"].pop("output_dir", None)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class CommandParams(BaseModel):
    """Parameters shared by every experiment command (CLI flags and MCP tools)"""
    config_path: str = Field(description="Path to the key = value config file")
    out_dir: Optional[str] = Field(default=None, description="Output directory override")
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64, description="Seed override")


class RunSummary(BaseModel):
    """Summary written as summary.json; wall-clock time is logged, never persisted"""
    model_config = ConfigDict(extra="forbid")

    config_hash: str
    final_time: float
    steps: int
    final_energy: float
    final_higher_energy: float
    initial_energy: float
    identity_residual: float
    energy_total_variation: float
    energy_monotone: bool
    decay_fit: Optional[dict] = None
    nakao: Optional[dict] = None
    strichartz_l5_l10: float
    strichartz_l4_l12: float
    quadrature_error_l10: float
    quadrature_error_l12: float
    band_limited: Optional[bool] = None
    max_sm_defect: float = 0.0
    violations: list[str] = Field(default_factory=list)
    wall_clock_seconds: float = Field(default=0.0, exclude=True)
