"""
Application configuration management.

Loads settings from environment variables (prefix ``SBV_``) with sensible defaults.
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="SBV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Environment
    environment: str = "development"
    debug: bool = False

    # Parallelism (SBV_THREADS)
    threads: int = Field(default=1, ge=1)

    # Logging
    log_level: str = "INFO"
    log_format: str = "console"

    # Geodesics
    steiner_level: int = Field(default=2, ge=0, le=3)
    all_pairs_max_vertices: int = 5000
    double_sweep_sources: int = 32

    # Spectrum
    eigen_tol: float = Field(default=1e-10, gt=0)
    eigen_max_iter: int = Field(default=10000, ge=1)
    stagnation_window: int = 50
    dense_max_dimension: int = 2000
    positivity_warning_fraction: float = 0.001

    # Bounds
    mu_grid: int = Field(default=64, ge=16)
    mu_min: float = Field(default=1e-3, gt=0, lt=1)
    verification_rel_tol: float = 0.05
    verification_abs_tol: float = 1e-8

    # Proofcheck
    proofcheck_assert_vertices: int = 1000
    proofcheck_slack_fraction: float = 0.02

    # Reporting
    coarse_mesh_vertices: int = 100

    def thread_count(self, jobs: int | None = None) -> int:
        """Effective worker count, never more than the number of jobs."""
        if jobs is None:
            return self.threads
        return max(1, min(self.threads, jobs))

    def verification_tolerance(self, rhs: float) -> float:
        """Discretization allowance for a bound whose right-hand side is ``rhs``."""
        return self.verification_abs_tol + self.verification_rel_tol * abs(rhs)


@lru_cache
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Uses lru_cache to ensure settings are only loaded once.
    """
    return Settings()
