"""Locate the fixture bundles shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def fixture_root() -> Path:
    return Path(str(resources.files("arguide").joinpath("fixtures")))


def fixture_dir(fixture_id: str) -> Path:
    path = fixture_root() / fixture_id
    if not path.is_dir():
        known = ", ".join(sorted(p.name for p in fixture_root().iterdir() if p.is_dir()))
        raise FileNotFoundError(f"no fixture {fixture_id!r}; shipped fixtures: {known}")
    return path


def list_fixtures() -> list[str]:
    return sorted(p.name for p in fixture_root().iterdir() if p.is_dir())
