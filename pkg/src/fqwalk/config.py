"""
Runtime configuration.

Values come from the environment (optionally a ``.env`` file in the working
directory). Only tolerances and iteration limits are configurable; the
numerical constants below are fixed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

# Entries of a 2x2 coin, realness of d, modulus of omega.
UNITARY_TOL = 1e-12
# |omega^n - 1| below this counts as a root of unity.
ROOT_OF_UNITY_TOL = 1e-10
# Amplitudes below this are printed as zero.
PRINT_ZERO_TOL = 1e-12
# Relative singular value cutoff for the fixed-point least-squares solve.
RANK_TOL = 1e-10
# A fixed-point residual above this is a bug, not rounding.
SOLVE_RESIDUAL_TOL = 1e-8
# Brute-force enumeration visits 2**edges subsets.
MAX_ENUMERATION_EDGES = 22

DEFAULT_TOL = 1e-10
DEFAULT_MAX_STEPS = 100_000
DEFAULT_SUPPORT_THRESHOLD = 1e-10


def _positive_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {raw!r}")
    return value


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {raw!r}")
    return value


@dataclass(frozen=True)
class Settings:
    tol: float = DEFAULT_TOL
    max_steps: int = DEFAULT_MAX_STEPS
    support_threshold: float = DEFAULT_SUPPORT_THRESHOLD
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        """Read FQW_* variables, falling back to the defaults."""
        return cls(
            tol=_positive_float("FQW_TOL", DEFAULT_TOL),
            max_steps=_positive_int("FQW_MAX_STEPS", DEFAULT_MAX_STEPS),
            support_threshold=_positive_float(
                "FQW_SUPPORT_THRESHOLD", DEFAULT_SUPPORT_THRESHOLD
            ),
            log_level=os.getenv("FQW_LOG_LEVEL", "WARNING").upper(),
        )
