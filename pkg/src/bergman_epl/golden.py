"""Frozen oracle values shipped with the package (regenerate with tools/compute_golden.py)."""

from __future__ import annotations

import functools
import json
from importlib import resources


@functools.lru_cache(maxsize=1)
def load() -> dict:
    return json.loads(resources.files("bergman_epl").joinpath("data/golden.json").read_text())


def ke_threshold(p: float, lam: float) -> float | None:
    """Pre-registered lower bound on the KE residual for a witness (p, lambda), if one exists."""
    for row in load()["ke_thresholds"]:
        if row["p"] == p and row["lambda"] == lam:
            return row["threshold"]
    return None


def heat_value() -> dict:
    return load()["heat"]
