from pydantic import BaseSettings, Field


class Settings(BaseSettings):
    """Library wide defaults, overridable through ``POLYMEAN_*`` env vars"""

    tol: float = Field(1e-9, ge=0, description="absolute geometric tolerance")
    rel_tol: float = Field(1e-9, ge=0)
    bisection_max_iter: int = Field(100, gt=0)
    median_max_iter: int = Field(1000, gt=0)
    exact_max_vertices: int = Field(8, gt=1)
    exact_max_curves: int = Field(3, gt=1)
    oracle_max_candidates: int = Field(10_000, gt=0)
    oracle_max_checks: int = Field(2_000_000, gt=0)
    seed: int = 0
    log_level: str = "WARNING"

    class Config:
        env_prefix = "POLYMEAN_"
