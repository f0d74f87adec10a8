"""Runtime caps, overridable through GROUPCOVER_* environment variables."""

from __future__ import annotations

import os


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else default


def element_cap() -> int:
    """Largest group order that gets fully enumerated."""
    return _env_int("GROUPCOVER_ELEMENT_CAP", 20_000)


def lattice_cap() -> int:
    """Largest group order for which the full subgroup lattice is computed."""
    return _env_int("GROUPCOVER_LATTICE_CAP", 10_000)


def solve_budget() -> float:
    """Default time budget in seconds for one exact minimum-cover solve."""
    return _env_float("GROUPCOVER_SOLVE_BUDGET", 60.0)


def coset_subset_cap() -> int:
    """Largest quotient size |X/N| over which sigma-star searches coset subsets."""
    return _env_int("GROUPCOVER_COSET_CAP", 12)


def table_byte_cap() -> int:
    """Memory ceiling for a cached multiplication table (bytes)."""
    return _env_int("GROUPCOVER_TABLE_BYTES", 300_000_000)
