"""Access to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def _data_path(name: str) -> Path:
    return Path(str(resources.files("taxiwarn.data").joinpath(name)))


def bundled_map_path() -> Path:
    """Demo airport: the B chain (B-1..B-8), C, N, P plus the C1/C6 connectors."""
    return _data_path("airport.json")


def bundled_fleet_path() -> Path:
    return _data_path("fleet.json")


def bundled_registry_path() -> Path:
    return _data_path("registry.json")
