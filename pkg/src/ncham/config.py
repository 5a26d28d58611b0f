"""Run configuration shared by the kernel, the service and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_TOL = "NCHAM_TOL"

DEFAULT_TOL = 1e-9
DEFAULT_FD_STEP = 1e-5
DEFAULT_SEED = 42
DEFAULT_DEGREE_BOUND = 4


def default_tolerance() -> float:
    """Default absolute tolerance, overridable via the NCHAM_TOL env var."""
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return DEFAULT_TOL
    tol = float(raw)
    if tol <= 0:
        raise ValueError(f"{ENV_TOL} must be positive, got {raw!r}")
    return tol


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    fd_step: float = DEFAULT_FD_STEP
    seed: int = DEFAULT_SEED
    degree_bound: int = DEFAULT_DEGREE_BOUND
    output_format: str = "text"  # text | json | csv

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.fd_step <= 0:
            raise ValueError("fd_step must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        base = {"tolerance": default_tolerance()}
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)
