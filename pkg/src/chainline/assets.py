"""Access to the data files bundled with the package."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .errors import ChainlineError
from .model import FeatureModel
from .parser import parse_model

TRACEABILITY_MODEL = "traceability"


def asset_root() -> Path:
    return Path(str(files("chainline").joinpath("assets")))


def template_dir() -> Path:
    return asset_root() / "templates"


def fixture_dir() -> Path:
    return asset_root() / "configs"


def scenarios_path() -> Path:
    return asset_root() / "scenarios.json"


def model_path(name: str = TRACEABILITY_MODEL) -> Path:
    path = asset_root() / f"{name}.fm"
    if not path.exists():
        raise ChainlineError(f"no bundled model named '{name}'")
    return path


def load_bundled_model(name: str = TRACEABILITY_MODEL) -> FeatureModel:
    return parse_model(model_path(name).read_text(encoding="utf-8"))


def fixture_path(name: str) -> Path:
    path = fixture_dir() / f"{name}.json"
    if not path.exists():
        raise ChainlineError(f"no bundled configuration fixture named '{name}'")
    return path
