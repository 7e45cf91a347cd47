"""Bundled conformance corpus of app specs."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .model import AppSpec, load_app_spec

# activities reachable from the main activity in each generated census app
CENSUS = {"aliexpress": 7, "ebay": 4, "yahoo": 5, "reddit": 12, "yelp": 17}


def fixture_names() -> list[str]:
    root = resources.files(__package__) / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__package__) / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> AppSpec:
    return load_app_spec(fixture_path(name).read_text(encoding="utf-8"))
