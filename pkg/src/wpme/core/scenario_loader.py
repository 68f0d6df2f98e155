"""
Scenario Loader — TOML scenario files to validated Scenario models.
Bundled scenarios in wpme/scenarios can be referenced by name.
"""

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError

from wpme.exceptions import ScenarioError
from wpme.schemas.scenario import Scenario
from wpme.services.common import log_info

SCENARIOS_DIR = Path(__file__).parent.parent / "scenarios"


def describe_validation_error(exc: ValidationError) -> str:
    """One line per failing constraint: 'location: message'."""
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ()))
        message = str(error.get("msg", "")).removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def list_bundled_scenarios() -> List[str]:
    return sorted(path.stem for path in SCENARIOS_DIR.glob("*.toml"))


def resolve_scenario_path(ref: Union[str, Path]) -> Path:
    """A path on disk, or the name of a bundled scenario (with or without .toml)."""
    path = Path(ref)
    if path.is_file():
        return path
    bundled = SCENARIOS_DIR / (path.name if path.suffix == ".toml" else f"{path.name}.toml")
    if bundled.is_file():
        return bundled
    raise ScenarioError(
        f"scenario not found (bundled: {', '.join(list_bundled_scenarios())})", str(ref)
    )


def parse_scenario(data: Dict[str, Any], source: Optional[str] = None) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(describe_validation_error(e), source) from e


def load_scenario(ref: Union[str, Path]) -> Scenario:
    """
    Read and validate a scenario. A relative initial.file is resolved against
    the scenario file's directory.
    """
    path = resolve_scenario_path(ref)
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"TOML parse error: {e}", str(path)) from e

    initial = data.get("initial")
    if isinstance(initial, dict) and isinstance(initial.get("file"), str):
        file_path = Path(initial["file"])
        if not file_path.is_absolute():
            initial["file"] = str(path.parent / file_path)

    scenario = parse_scenario(data, str(path))
    log_info(f"Loaded scenario '{scenario.name}' from {path} ({len(scenario.checks)} checks)")
    return scenario
