"""
Smoke-test fixtures for twistlab.

Provides the paths of the shipped session configs so that the smoke suite
can drive the real CLI end to end, exactly as a user would.

Key Concepts Demonstrated:
- Session-scoped path fixtures shared across the whole smoke suite
- Forcing the testing profile before the package is imported
"""

from __future__ import annotations

import os
from pathlib import Path

import pytest

os.environ.setdefault("TWISTLAB_ENV", "testing")

REPO_ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def shipped_configs() -> dict[str, Path]:
    """Map config stem to path for every JSON config under configs/."""
    return {path.stem: path for path in sorted((REPO_ROOT / "configs").glob("*.json"))}
