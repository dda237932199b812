"""The discrete spatio-temporal glimpse lattice.

A glimpse is a fixed-direction NFOV clip over one time interval. The lattice
samples latitudes more densely near the equator (neighboring cells at high
latitude overlap more on the sphere) and longitudes uniformly every 20
degrees, 198 locations per time step by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sphere import CameraModel, Direction, EquirectImage

__all__ = [
    "DEFAULT_LATITUDES",
    "DEFAULT_LONGITUDES",
    "GlimpseGrid",
    "STGlimpse",
    "build_grid",
    "glimpse_clip",
]

DEFAULT_LATITUDES = (-75.0, -45.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 45.0, 75.0)
DEFAULT_LONGITUDES = tuple(float(p) for p in range(0, 360, 20))


@dataclass(frozen=True)
class STGlimpse:
    """One lattice cell: a time-step index plus a camera direction."""

    t: int
    dir: Direction


@dataclass(frozen=True)
class GlimpseGrid:
    """The (time x latitude x longitude) glimpse lattice of one video.

    Enumeration order is deterministic: t-major, then latitudes ascending,
    then longitudes ascending; ``linear_index`` round-trips with that order.
    """

    num_steps: int
    latitudes: tuple[float, ...] = DEFAULT_LATITUDES
    longitudes: tuple[float, ...] = DEFAULT_LONGITUDES
    interval: float = 5.0

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError("interval must be positive")
        if self.num_steps < 1:
            raise ValueError("grid needs at least one time step")
        lats = tuple(float(v) for v in self.latitudes)
        lons = tuple(float(v) % 360.0 for v in self.longitudes)
        if lats != tuple(sorted(lats)) or len(set(lats)) != len(lats):
            raise ValueError("latitudes must be strictly ascending")
        if lons != tuple(sorted(lons)) or len(set(lons)) != len(lons):
            raise ValueError("longitudes must be strictly ascending after normalization")
        if lats and (lats[0] < -90.0 or lats[-1] > 90.0):
            raise ValueError("latitudes must lie within [-90, 90]")
        if not lats or not lons:
            raise ValueError("latitude and longitude sets must be non-empty")
        object.__setattr__(self, "latitudes", lats)
        object.__setattr__(self, "longitudes", lons)

    @property
    def n_lat(self) -> int:
        return len(self.latitudes)

    @property
    def n_lon(self) -> int:
        return len(self.longitudes)

    @property
    def locations_per_step(self) -> int:
        return self.n_lat * self.n_lon

    @property
    def n_glimpses(self) -> int:
        return self.num_steps * self.locations_per_step

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.num_steps, self.n_lat, self.n_lon)

    def direction(self, lat_idx: int, lon_idx: int) -> Direction:
        return Direction(self.latitudes[lat_idx], self.longitudes[lon_idx])

    def glimpse(self, t: int, lat_idx: int, lon_idx: int) -> STGlimpse:
        if not 0 <= t < self.num_steps:
            raise IndexError(f"time step {t} outside 0..{self.num_steps - 1}")
        return STGlimpse(t, self.direction(lat_idx, lon_idx))

    def linear_index(self, t: int, lat_idx: int, lon_idx: int) -> int:
        if not (0 <= t < self.num_steps and 0 <= lat_idx < self.n_lat and 0 <= lon_idx < self.n_lon):
            raise IndexError(f"cell ({t}, {lat_idx}, {lon_idx}) outside grid {self.shape}")
        return (t * self.n_lat + lat_idx) * self.n_lon + lon_idx

    def cell_from_linear(self, idx: int) -> tuple[int, int, int]:
        if not 0 <= idx < self.n_glimpses:
            raise IndexError(f"linear index {idx} outside 0..{self.n_glimpses - 1}")
        t, rem = divmod(idx, self.locations_per_step)
        lat_idx, lon_idx = divmod(rem, self.n_lon)
        return t, lat_idx, lon_idx

    def glimpses(self):
        """Iterate all glimpses in linear-index order."""
        for t in range(self.num_steps):
            for i in range(self.n_lat):
                for j in range(self.n_lon):
                    yield self.glimpse(t, i, j)

    def indices_of(self, d: Direction) -> tuple[int, int]:
        """Exact lattice indices of a direction; raises if not on the lattice."""
        lat = np.asarray(self.latitudes)
        lon = np.asarray(self.longitudes)
        i = int(np.argmin(np.abs(lat - d.theta)))
        dphi = np.abs(lon - d.phi) % 360.0
        j = int(np.argmin(np.minimum(dphi, 360.0 - dphi)))
        if abs(lat[i] - d.theta) > 1e-9 or min(dphi[j], 360.0 - dphi[j]) > 1e-9:
            raise ValueError(f"direction ({d.theta}, {d.phi}) is not a lattice location")
        return i, j

    def nearest_cell(self, theta: float, phi: float) -> tuple[int, int]:
        """Lattice indices closest to an arbitrary angle pair.

        Nearest by |dtheta| and by wrapped |dphi| independently; ties break
        toward the smaller index, which is deterministic.
        """
        lat = np.asarray(self.latitudes)
        lon = np.asarray(self.longitudes)
        i = int(np.argmin(np.abs(lat - theta)))
        dphi = np.abs(lon - (phi % 360.0)) % 360.0
        j = int(np.argmin(np.minimum(dphi, 360.0 - dphi)))
        return i, j


def build_grid(
    video_duration: float,
    interval: float = 5.0,
    latitudes=DEFAULT_LATITUDES,
    longitudes=DEFAULT_LONGITUDES,
) -> GlimpseGrid:
    """Lay the glimpse lattice over a video.

    Glimpse (t, theta, phi) covers the half-open span
    [t*interval, (t+1)*interval); a trailing partial interval is dropped so
    every glimpse clip has equal duration.
    """
    if interval <= 0:
        raise ValueError("interval must be positive")
    num_steps = int(video_duration // interval)
    if num_steps < 1:
        raise ValueError(
            f"video of {video_duration}s is shorter than one {interval}s interval"
        )
    return GlimpseGrid(num_steps, tuple(latitudes), tuple(longitudes), float(interval))


def glimpse_clip(frames, fps: float, grid: GlimpseGrid, g: STGlimpse, cam: CameraModel):
    """Render the NFOV clip of one glimpse: every source frame in its span,
    projected at the glimpse's fixed direction.

    ``frames`` is the full video's equirectangular frame sequence.
    Returns an array of shape (n_frames, cam.height_px, cam.width_px[, C]).
    """
    from .render import render_frame

    start = round(g.t * grid.interval * fps)
    stop = round((g.t + 1) * grid.interval * fps)
    if stop > len(frames):
        raise ValueError(
            f"frames do not cover glimpse span: need up to index {stop - 1}, "
            f"have {len(frames)}"
        )
    return np.stack([render_frame(frames[i], cam, g.dir) for i in range(start, stop)])
