"""Run configuration with the published peak/valley defaults.

Precedence: CLI flags > config file (flat JSON object) > built-ins.
"""

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional, Tuple

from faceartifacts.errors import ParseError
from faceartifacts.metrics import METRICS
from faceartifacts.polygonizer import FULL_GEOMETRIC, SHARED_ENDPOINTS
from faceartifacts.threshold import VALLEY_RULE_ADJACENT, VALLEY_RULE_FIRST


@dataclass
class RunConfig:
    metric: str = "cc"
    grid_points: int = 1024
    peak_min_height: float = 0.0008
    peak_min_prominence: float = 0.00075
    valley_rule: str = VALLEY_RULE_ADJACENT
    validation_x: Tuple[float, ...] = (0.0, 10.0, 50.0, 100.0)
    noding_mode: str = SHARED_ENDPOINTS
    threshold_override: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.grid_points < 8:
            raise ValueError("grid_points must be at least 8")
        if self.peak_min_height < 0 or self.peak_min_prominence < 0:
            raise ValueError("peak filters must be nonnegative")
        if self.valley_rule not in (VALLEY_RULE_ADJACENT, VALLEY_RULE_FIRST):
            raise ValueError(f"unknown valley rule {self.valley_rule!r}")
        if self.noding_mode not in (SHARED_ENDPOINTS, FULL_GEOMETRIC):
            raise ValueError(f"unknown noding mode {self.noding_mode!r}")
        if any(x < 0 for x in self.validation_x):
            raise ValueError("validation_x levels must be nonnegative")
        self.validation_x = tuple(float(x) for x in self.validation_x)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["validation_x"] = list(self.validation_x)
        return d


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def load_config(path: Optional[str], overrides: Optional[dict] = None) -> RunConfig:
    """Config file plus CLI overrides, CLI winning."""
    values = {}
    if path:
        with open(path, "r", encoding="utf-8") as fp:
            try:
                doc = json.load(fp)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"config is not valid JSON: {exc.msg}",
                    context=f"byte offset {exc.pos}",
                ) from None
        if not isinstance(doc, dict):
            raise ParseError("config must be a JSON object")
        unknown = set(doc) - _FIELD_NAMES
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
        values.update(doc)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return RunConfig(**values)
