"""Toolkit configuration with JSON persistence and environment defaults."""

import json
import os
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from generalized_turan.errors import ParameterError


class ToolkitConfig(BaseModel):
    """Settings shared by every command."""

    cache_dir: str = Field(default="./.turan-cache", description="Directory for cached oracle results")
    use_cache: bool = Field(default=True, description="Whether oracle results are cached")
    jobs: int = Field(default=1, ge=1, description="Worker processes for parallel searches")
    timeout: float | None = Field(default=None, gt=0, description="Oracle time limit in seconds")
    seed: int = Field(default=0, description="Seed for every randomised step")
    anchor_samples: int = Field(default=200, ge=1, description="Random anchor tuples tried by the G0 construction")
    representative_trials: int = Field(
        default=20, ge=0, description="Random representative choices tried when verifying a Füredi graph"
    )
    debug: bool = Field(default=False, description="Debug mode")

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump()

    @classmethod
    def from_dict(cls, data: dict) -> "ToolkitConfig":
        try:
            return cls(**data)
        except ValidationError as e:
            msg = f"invalid configuration: {e}"
            raise ParameterError(msg) from e

    def save_to_file(self, filepath: str | Path) -> None:
        """Save configuration to JSON file."""
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load_from_file(cls, filepath: str | Path) -> "ToolkitConfig":
        """Load configuration from JSON file; a missing file gives the defaults."""
        filepath = Path(filepath)
        if not filepath.exists():
            return cls()
        with open(filepath) as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                msg = f"{filepath} is not valid JSON: {e}"
                raise ParameterError(msg) from e
        return cls.from_dict(data)


def _env_int(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as e:
        msg = f"{name} must be an integer, got {raw!r}"
        raise ParameterError(msg) from e


def create_default_config() -> ToolkitConfig:
    """Default configuration with TURAN_* environment overrides applied."""
    data: dict[str, Any] = {}
    if cache_dir := os.getenv("TURAN_CACHE_DIR"):
        data["cache_dir"] = cache_dir
    if os.getenv("TURAN_NO_CACHE"):
        data["use_cache"] = False
    if (jobs := _env_int("TURAN_JOBS")) is not None:
        data["jobs"] = jobs
    if (seed := _env_int("TURAN_SEED")) is not None:
        data["seed"] = seed
    if timeout := os.getenv("TURAN_TIMEOUT"):
        try:
            data["timeout"] = float(timeout)
        except ValueError as e:
            msg = f"TURAN_TIMEOUT must be a number, got {timeout!r}"
            raise ParameterError(msg) from e
    return ToolkitConfig.from_dict(data)
