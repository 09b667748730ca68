import os

from pydantic import BaseModel, field_validator

ENV_PREFIX = "BEAMSPACE_"


class Config(BaseModel):
    """Library-wide tunables; every field can be overridden by BEAMSPACE_<FIELD>."""

    grid_step_deg: float = 0.25
    same_pattern_rel_tol: float = 1e-9
    dedup_rel_tol: float = 1e-6
    endpoint_eps: float = 1e-9
    max_full_enumeration_m: int = 24
    max_polynomial_m: int = 65
    quadrature_points: int = 2048
    insector_grid_count: int = 41
    outsector_grid_count: int = 180
    transition_band_deg: float = 5.0
    subset_budget: int = 10_000_000
    subset_exact_limit: int = 100_000
    threads: int | None = None
    seed: int = 0
    ledger_url: str | None = None
    log_level: str = "WARNING"

    @field_validator(
        "grid_step_deg",
        "same_pattern_rel_tol",
        "dedup_rel_tol",
        "endpoint_eps",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("Value must be positive")
        return v

    @field_validator("quadrature_points", "insector_grid_count", "outsector_grid_count")
    @classmethod
    def validate_grid_count(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Grid counts must be at least 2")
        return v

    @field_validator("subset_budget", "subset_exact_limit")
    @classmethod
    def validate_budget(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Subset budgets must be at least 1")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int | None) -> int | None:
        if v is not None and v < 1:
            raise ValueError("Thread count must be at least 1")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level {v!r}")
        return level

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> "Config":
        environ = os.environ if environ is None else environ
        overrides: dict[str, str | None] = {}
        for name in cls.model_fields:
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is None:
                continue
            # "none" clears optional fields such as threads and ledger_url
            overrides[name] = None if raw.strip().lower() in {"", "none"} else raw
        return cls.model_validate(overrides)

    def resolved_threads(self) -> int:
        return self.threads or os.cpu_count() or 1


config = Config.from_env()
