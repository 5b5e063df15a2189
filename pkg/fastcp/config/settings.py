"""
Runtime settings and defaults for fastcp.
"""

from typing import List

# Prefer pydantic-settings (Pydantic v2); pydantic 1.x ships BaseSettings itself.
try:
    from pydantic_settings import BaseSettings  # type: ignore
except ImportError:  # pragma: no cover - depends on the installed pydantic
    from pydantic import BaseSettings  # type: ignore


class Settings(BaseSettings):
    """Application settings, overridable through FASTCP_* environment variables."""

    # Application settings
    APP_NAME: str = "fastcp"
    LOG_LEVEL: str = "INFO"

    # Solver defaults
    DEFAULT_ITERS: int = 20
    DEFAULT_SEED: int = 42
    PINV_RTOL: float = 1e-12
    MU_EPSILON: float = 1e-12
    GD_STEP: float = 1e-3

    # Cost evaluation builds the full model tensor up to this many entries
    COST_MATERIALIZE_LIMIT: int = 1_000_000

    # Benchmark
    BENCH_MEM_BUDGET: int = 1 << 30
    BENCH_MIN_MEASURED_ITERS: int = 200
    BENCH_GRID_NDIMS: List[int] = [3, 4, 5, 6, 7]
    BENCH_GRID_SIZES: List[int] = [10, 20, 30, 40]

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "FASTCP_"
        case_sensitive = True
