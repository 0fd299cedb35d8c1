"""Locating bundled data files, with an environment override.

The package ships a small data directory (link table, example Coxeter
diagrams).  Setting ``HYPLAT_DATA_DIR`` points all lookups at a different
directory with the same layout, so users can swap in extended tables
without touching the installation.
"""

from __future__ import annotations

import os
from pathlib import Path

DATA_DIR_ENV = "HYPLAT_DATA_DIR"


def data_dir() -> Path:
    """The active data directory (bundled unless overridden)."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def bundled_path(relative: str) -> Path:
    """Resolve ``relative`` inside the active data directory."""
    return data_dir() / relative
