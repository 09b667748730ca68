import math
from typing import Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..config import config


def validation_messages(exc: ValidationError) -> dict[str, str]:
    """Convert a pydantic ValidationError to a field->message dict."""
    errors = {}
    for err in exc.errors():
        field = ".".join(str(part) for part in err["loc"]) if err["loc"] else "field"
        errors[field] = err["msg"]
    return errors


def _frozen_array(v: Any, dtype) -> np.ndarray:
    arr = np.array(v, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


class ArrayGeometry(BaseModel):
    """Uniform linear array: element count M and spacing d in wavelengths."""

    model_config = ConfigDict(frozen=True)

    element_count: int
    spacing: float = 0.5

    @field_validator("element_count")
    @classmethod
    def validate_element_count(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Element count must be at least 2")
        return v

    @field_validator("spacing")
    @classmethod
    def validate_spacing(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("Spacing must be a positive number of wavelengths")
        return v


class BeamVector(BaseModel):
    """Complex transmit weights of a uniform linear array."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    geometry: ArrayGeometry
    weights: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def validate_weights(cls, v: Any) -> np.ndarray:
        arr = _frozen_array(v, np.complex128)
        if not np.all(np.isfinite(arr)):
            raise ValueError("Weights must be finite (no NaN or Inf)")
        return arr

    @model_validator(mode="after")
    def validate_length(self) -> "BeamVector":
        if self.weights.shape[0] != self.geometry.element_count:
            raise ValueError(
                f"Expected {self.geometry.element_count} weights, "
                f"got {self.weights.shape[0]}"
            )
        return self

    @classmethod
    def from_weights(
        cls,
        weights: Any,
        spacing: float = 0.5,
        geometry: ArrayGeometry | None = None,
    ) -> "BeamVector":
        arr = np.asarray(weights, dtype=np.complex128).reshape(-1)
        if geometry is None:
            geometry = ArrayGeometry(element_count=arr.shape[0], spacing=spacing)
        return cls(geometry=geometry, weights=arr)

    @property
    def m(self) -> int:
        return self.geometry.element_count

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.weights))

    def with_weights(self, weights: Any) -> "BeamVector":
        return BeamVector(geometry=self.geometry, weights=weights)

    def scaled(self, factor: complex) -> "BeamVector":
        return self.with_weights(self.weights * factor)

    def to_document(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "spacing": self.geometry.spacing,
            "re": self.weights.real.tolist(),
            "im": self.weights.imag.tolist(),
        }

    @classmethod
    def from_document(cls, doc: Any) -> "BeamVector":
        parsed = BeamVectorDocument.model_validate(doc)
        return cls(
            geometry=ArrayGeometry(element_count=parsed.m, spacing=parsed.spacing),
            weights=np.asarray(parsed.re) + 1j * np.asarray(parsed.im),
        )


class BeamVectorDocument(BaseModel):
    """On-disk layout of a beam vector."""

    m: int
    spacing: float
    re: list[float]
    im: list[float]

    @model_validator(mode="after")
    def validate_lengths(self) -> "BeamVectorDocument":
        if len(self.re) != self.m or len(self.im) != self.m:
            raise ValueError(
                f"Length mismatch: m = {self.m} but re has {len(self.re)} "
                f"and im has {len(self.im)} entries"
            )
        return self


class PatternGrid(BaseModel):
    """Beampattern samples p(theta) on an angle grid in degrees."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    angles: np.ndarray
    powers: np.ndarray

    @field_validator("angles", "powers", mode="before")
    @classmethod
    def validate_array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, np.float64)

    @field_validator("angles")
    @classmethod
    def validate_angles(cls, v: np.ndarray) -> np.ndarray:
        if v.size and (v.min() < -90 or v.max() > 90):
            raise ValueError("Angles must lie within [-90, 90] degrees")
        if np.any(np.diff(v) <= 0):
            raise ValueError("Angles must be strictly increasing")
        return v

    @field_validator("powers")
    @classmethod
    def validate_powers(cls, v: np.ndarray) -> np.ndarray:
        if np.any(v < 0):
            raise ValueError("Powers must be nonnegative")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "PatternGrid":
        if self.angles.shape != self.powers.shape:
            raise ValueError("Angles and powers must have the same length")
        return self


class AutocorrSequence(BaseModel):
    """Lags r_0..r_{M-1} of the weight autocorrelation; r_{-k} = conj(r_k)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lags: np.ndarray

    @field_validator("lags", mode="before")
    @classmethod
    def validate_lags(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.complex128).reshape(-1)
        if arr.size == 0:
            raise ValueError("At least one lag is required")
        if arr[0].real < 0:
            raise ValueError("Lag 0 must be nonnegative")
        # lag 0 is a squared norm
        arr[0] = arr[0].real
        arr.flags.writeable = False
        return arr

    def lag(self, k: int) -> complex:
        value = self.lags[abs(k)]
        return complex(value if k >= 0 else np.conj(value))

    @property
    def energy(self) -> float:
        return float(self.lags[0].real)


class RootFactorization(BaseModel):
    """Roots x_i of w_1 + w_2 x + ... + w_M x^(M-1) with the leading coefficient w_M."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    geometry: ArrayGeometry
    roots: np.ndarray
    leading_magnitude: float
    leading_phase: float

    @field_validator("roots", mode="before")
    @classmethod
    def validate_roots(cls, v: Any) -> np.ndarray:
        arr = _frozen_array(v, np.complex128)
        if np.any(arr == 0):
            raise ValueError("Roots must be nonzero")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Roots must be finite")
        return arr

    @field_validator("leading_magnitude")
    @classmethod
    def validate_leading_magnitude(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("Leading magnitude must be positive")
        return v

    @field_validator("leading_phase")
    @classmethod
    def validate_leading_phase(cls, v: float) -> float:
        if not -math.pi < v <= math.pi:
            raise ValueError("Leading phase must lie in (-pi, pi]")
        return v

    @model_validator(mode="after")
    def validate_root_count(self) -> "RootFactorization":
        if self.roots.shape[0] != self.geometry.element_count - 1:
            raise ValueError(
                f"Expected {self.geometry.element_count - 1} roots, "
                f"got {self.roots.shape[0]}"
            )
        return self

    @property
    def leading_coefficient(self) -> complex:
        return self.leading_magnitude * complex(
            math.cos(self.leading_phase), math.sin(self.leading_phase)
        )


class FlipMask(BaseModel):
    """Subset S of root indices (1-based) whose roots are replaced by 1/conj(x_i)."""

    model_config = ConfigDict(frozen=True)

    size: int
    indices: frozenset[int] = frozenset()

    @field_validator("size")
    @classmethod
    def validate_size(cls, v: int) -> int:
        if v < 1:
            raise ValueError("A mask covers at least one root")
        return v

    @model_validator(mode="after")
    def validate_indices(self) -> "FlipMask":
        bad = sorted(i for i in self.indices if not 1 <= i <= self.size)
        if bad:
            raise ValueError(f"Mask indices {bad} outside [1, {self.size}]")
        return self

    @classmethod
    def from_int(cls, mask: int, size: int) -> "FlipMask":
        return cls(size=size, indices=frozenset(i + 1 for i in range(size) if mask >> i & 1))

    @classmethod
    def from_bits(cls, bits: str) -> "FlipMask":
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"Invalid mask bit string {bits!r}")
        return cls(size=len(bits), indices=frozenset(i + 1 for i, b in enumerate(bits) if b == "1"))

    def as_int(self) -> int:
        return sum(1 << (i - 1) for i in self.indices)

    def to_bits(self) -> str:
        return "".join("1" if i + 1 in self.indices else "0" for i in range(self.size))

    def selector(self) -> np.ndarray:
        flags = np.zeros(self.size, dtype=bool)
        flags[[i - 1 for i in self.indices]] = True
        return flags


class Family(BaseModel):
    """Canonical, deduplicated members sharing the mother's beampattern."""

    model_config = ConfigDict(frozen=True)

    mother: BeamVector
    members: tuple[BeamVector, ...]
    masks: tuple[FlipMask, ...]
    distinct_count: int

    @model_validator(mode="after")
    def validate_members(self) -> "Family":
        if len(self.members) != len(self.masks):
            raise ValueError("Every member needs one representative mask")
        if len(self.members) != self.distinct_count:
            raise ValueError("distinct_count must equal the number of members")
        upper = 2 ** (self.mother.m - 1)
        if not 1 <= self.distinct_count <= upper:
            raise ValueError(f"distinct_count must lie in [1, {upper}]")
        for member in self.members:
            if member.geometry != self.mother.geometry:
                raise ValueError("Members must share the mother's geometry")
        return self


PhaseProfile = Literal["two_pi_sin", "array_center", "zero"]


def _check_interval(interval: tuple[float, float], name: str) -> tuple[float, float]:
    lo, hi = interval
    if not -90 <= lo < hi <= 90:
        raise ValueError(f"{name} [{lo}, {hi}] must satisfy -90 <= lo < hi <= 90")
    return (float(lo), float(hi))


class DesignSpec(BaseModel):
    """Inputs of the sector designs: geometry, sector, sidelobe bound, grids and power."""

    model_config = ConfigDict(frozen=True)

    geometry: ArrayGeometry
    sector: tuple[float, float]
    out_sector: tuple[tuple[float, float], ...]
    total_power: float
    delta: float = 0.1
    insector_grid_count: int = Field(default_factory=lambda: config.insector_grid_count)
    outsector_grid_count: int = Field(default_factory=lambda: config.outsector_grid_count)
    phase_profile: PhaseProfile = "two_pi_sin"
    quadrature_points: int = Field(default_factory=lambda: config.quadrature_points)

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        geometry = data.get("geometry")
        if data.get("total_power") is None:
            if isinstance(geometry, ArrayGeometry):
                data["total_power"] = float(geometry.element_count)
            elif isinstance(geometry, dict) and "element_count" in geometry:
                data["total_power"] = float(geometry["element_count"])
        if data.get("out_sector") is None and data.get("sector") is not None:
            try:
                lo, hi = (float(x) for x in data["sector"])
            except (TypeError, ValueError) as e:
                raise ValueError(f"Sector must be two angles, got {data['sector']!r}") from e
            band = config.transition_band_deg
            parts = [(-90.0, lo - band), (hi + band, 90.0)]
            data["out_sector"] = tuple((a, b) for a, b in parts if a < b)
        return data

    @field_validator("sector")
    @classmethod
    def validate_sector(cls, v: tuple[float, float]) -> tuple[float, float]:
        return _check_interval(v, "Sector")

    @field_validator("out_sector")
    @classmethod
    def validate_out_sector(cls, v: tuple[tuple[float, float], ...]) -> tuple[tuple[float, float], ...]:
        return tuple(_check_interval(interval, "Out-of-sector interval") for interval in v)

    @field_validator("total_power", "delta")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("Value must be a positive number")
        return v

    @field_validator("insector_grid_count", "outsector_grid_count", "quadrature_points")
    @classmethod
    def validate_grid_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Grid counts must be positive")
        return v

    @model_validator(mode="after")
    def validate_disjoint(self) -> "DesignSpec":
        lo, hi = self.sector
        for a, b in self.out_sector:
            if a < hi and b > lo:
                raise ValueError(
                    f"Out-of-sector interval [{a}, {b}] overlaps the sector [{lo}, {hi}]"
                )
        return self

    @property
    def sector_width_rad(self) -> float:
        return math.radians(self.sector[1] - self.sector[0])


class SectorMatrix(BaseModel):
    """A = integral over the sector of a(theta) a(theta)^H."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def validate_entries(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("Sector matrix must be square")
        scale = max(float(np.abs(np.trace(arr))), 1.0)
        if np.max(np.abs(arr - arr.conj().T)) > 1e-12 * scale:
            raise ValueError("Sector matrix must be Hermitian")
        if np.linalg.eigvalsh(arr)[0] < -1e-10 * scale:
            raise ValueError("Sector matrix must be positive semidefinite")
        arr.flags.writeable = False
        return arr


class PowerProfile(BaseModel):
    """Per-element transmit power of a scaled set of beam vectors."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    per_element: np.ndarray
    total_power: float
    uniformity: float
    variance: float

    @field_validator("per_element", mode="before")
    @classmethod
    def validate_per_element(cls, v: Any) -> np.ndarray:
        arr = _frozen_array(v, np.float64)
        if np.any(arr < 0):
            raise ValueError("Element powers must be nonnegative")
        return arr

    @field_validator("uniformity", "variance")
    @classmethod
    def validate_nonnegative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("Uniformity scores must be nonnegative")
        return v

    @property
    def average(self) -> float:
        return self.total_power / self.per_element.shape[0]


class RunManifest(BaseModel):
    """Everything needed to re-run one CLI command."""

    command: str
    argv: list[str]
    parameters: dict[str, Any] = {}
    inputs: list[str] = []
    outputs: list[str] = []
    version: str
    wall_time_s: float = 0.0
