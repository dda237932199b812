"""Pipeline configuration.

One JSON config file carries every tunable; defaults reproduce the standard
experiment settings (30-degree motion limit, 20 outputs, 65.5-degree 4:3
camera, 5-second glimpses, the default lattice). Command-line flags
override individual fields.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .grid import DEFAULT_LATITUDES, DEFAULT_LONGITUDES, GlimpseGrid, build_grid
from .sphere import CameraModel

__all__ = ["PipelineConfig", "load_config"]


@dataclass
class PipelineConfig:
    latitudes: tuple[float, ...] = DEFAULT_LATITUDES
    longitudes: tuple[float, ...] = DEFAULT_LONGITUDES
    interval_seconds: float = 5.0
    epsilon: float = 30.0
    k: int = 20
    hfov: float = 65.5
    aspect: float = 4.0 / 3.0
    camera_width: int = 640
    camera_height: int = 480
    compare_fps: float = 1.0
    sigma: float = 10.0
    temperature: float = 1.0
    regularization_c: float = 1.0
    folds: int = 5
    hi: float = 0.95
    lo: float = 0.05
    standin_alpha: float = 8.0
    standin_beta: float = 16.0

    def camera(self) -> CameraModel:
        return CameraModel(self.hfov, self.aspect, self.camera_width, self.camera_height)

    def grid_for_duration(self, duration: float) -> GlimpseGrid:
        return build_grid(duration, self.interval_seconds, self.latitudes, self.longitudes)

    def grid_for_steps(self, num_steps: int) -> GlimpseGrid:
        return GlimpseGrid(num_steps, tuple(self.latitudes), tuple(self.longitudes), self.interval_seconds)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["latitudes"] = list(d["latitudes"])
        d["longitudes"] = list(d["longitudes"])
        return d


def load_config(path=None, overrides: dict | None = None) -> PipelineConfig:
    """Config from file (optional) plus non-None overrides."""
    cfg = PipelineConfig()
    merged: dict = {}
    if path is not None:
        with open(path) as f:
            merged.update(json.load(f))
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    known = set(cfg.__dataclass_fields__)
    unknown = set(merged) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for k, v in merged.items():
        if k in ("latitudes", "longitudes"):
            v = tuple(float(x) for x in v)
        setattr(cfg, k, v)
    return cfg
