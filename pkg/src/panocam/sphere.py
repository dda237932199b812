"""Spherical camera geometry.

Directions on the viewing sphere, the NFOV camera model, and the mappings
between sphere directions, equirectangular pixels, and NFOV raster pixels.

Conventions:
  * latitude ``theta`` in degrees, +90 at the north pole, 0 at eye level;
  * longitude ``phi`` in degrees, normalized to [0, 360) (inputs in
    [-180, 180) are accepted and normalized);
  * raster coordinates are continuous, origin at the top-left corner,
    x rightward, y downward, pixel centers at half-integer offsets;
  * the virtual camera has zero roll: its up vector is aligned with the
    meridian through the principal axis.

Everything here is a pure function over immutable values and safe for
unrestricted parallel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Direction",
    "CameraModel",
    "EquirectImage",
    "normalize_longitude",
    "angular_distance",
    "wrapped_delta",
    "signed_longitude_delta",
    "nfov_pixel_ray",
    "nfov_pixel_rays",
    "nfov_project",
    "sphere_to_equirect_px",
    "equirect_px_from_angles",
    "equirect_px_to_direction",
    "fov_outline",
]


def normalize_longitude(phi):
    """Map a longitude (degrees, scalar or array) into [0, 360)."""
    return phi % 360.0


def signed_longitude_delta(phi_from, phi_to):
    """Signed shorter-arc longitude step from ``phi_from`` to ``phi_to``.

    Result lies in (-180, 180]; a 180-degree separation resolves eastward.
    Works on scalars and arrays.
    """
    d = (np.asarray(phi_to, dtype=float) - np.asarray(phi_from, dtype=float)) % 360.0
    d = np.where(d > 180.0, d - 360.0, d)
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class Direction:
    """A camera principal axis as (latitude, longitude) in degrees."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if not -90.0 <= theta <= 90.0 or not math.isfinite(theta):
            raise ValueError(f"latitude must be in [-90, 90], got {self.theta}")
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValueError(f"longitude must be finite, got {self.phi}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % 360.0)

    def as_vector(self) -> np.ndarray:
        """Unit vector in the 360-camera frame (x toward phi=0, z toward the pole)."""
        t = math.radians(self.theta)
        p = math.radians(self.phi)
        return np.array(
            [math.cos(t) * math.cos(p), math.cos(t) * math.sin(p), math.sin(t)]
        )

    @classmethod
    def from_vector(cls, v) -> "Direction":
        x, y, z = (float(c) for c in v)
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise ValueError("zero vector has no direction")
        theta = math.degrees(math.asin(max(-1.0, min(1.0, z / r))))
        phi = math.degrees(math.atan2(y, x))
        return cls(theta, phi)


@dataclass(frozen=True)
class CameraModel:
    """Virtual NFOV camera intrinsics.

    Defaults model a typical 28mm full-frame lens: 65.5 degrees horizontal
    field of view at 4:3 aspect. The vertical half-angle follows from
    atan(tan(hfov/2) / aspect).
    """

    hfov: float = 65.5
    aspect: float = 4.0 / 3.0
    width_px: int = 640
    height_px: int = 480

    def __post_init__(self):
        if not 0.0 < self.hfov < 180.0:
            raise ValueError(f"hfov must be in (0, 180), got {self.hfov}")
        if self.aspect <= 0.0:
            raise ValueError(f"aspect must be positive, got {self.aspect}")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("raster dimensions must be positive")
        if abs(self.width_px - self.aspect * self.height_px) > 1.0:
            raise ValueError(
                f"{self.width_px}x{self.height_px} does not match aspect "
                f"{self.aspect} within one pixel"
            )

    @property
    def tan_half_h(self) -> float:
        return math.tan(math.radians(self.hfov / 2.0))

    @property
    def tan_half_v(self) -> float:
        return self.tan_half_h / self.aspect

    @property
    def vfov(self) -> float:
        """Vertical field of view in degrees."""
        return 2.0 * math.degrees(math.atan(self.tan_half_v))


@dataclass(frozen=True)
class EquirectImage:
    """A full-sphere equirectangular frame.

    Pixel (i, j) has center at continuous coordinates (j + 0.5, i + 0.5);
    x = phi/360 * width, y = (90 - theta)/180 * height.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim not in (2, 3):
            raise ValueError("pixel grid must be HxW or HxWxC")
        h, w = px.shape[:2]
        if w != 2 * h:
            raise ValueError(f"full-sphere frame needs width = 2*height, got {w}x{h}")
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def angular_distance(a: Direction, b: Direction) -> float:
    """Great-circle angle between two directions, in degrees within [0, 180]."""
    u = a.as_vector()
    v = b.as_vector()
    cross = np.cross(u, v)
    return math.degrees(math.atan2(float(np.linalg.norm(cross)), float(u @ v)))


def wrapped_delta(a: Direction, b: Direction) -> tuple[float, float]:
    """Componentwise angular displacement (|dtheta|, wrapped |dphi|), degrees."""
    dtheta = abs(a.theta - b.theta)
    d = abs(a.phi - b.phi) % 360.0
    dphi = min(d, 360.0 - d)
    return dtheta, dphi


def _camera_basis(principal: Direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal (forward, up, right) for a zero-roll camera at ``principal``."""
    t = math.radians(principal.theta)
    p = math.radians(principal.phi)
    ct, st = math.cos(t), math.sin(t)
    cp, sp = math.cos(p), math.sin(p)
    forward = np.array([ct * cp, ct * sp, st])
    up = np.array([-st * cp, -st * sp, ct])
    right = np.array([-sp, cp, 0.0])
    return forward, up, right


def nfov_pixel_rays(cam: CameraModel, principal: Direction, xs, ys):
    """Sphere directions seen by continuous raster coordinates (vectorized).

    Returns (thetas, phis) arrays in degrees. Coordinates must lie inside
    the raster rectangle [0, width] x [0, height].
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs < 0) or np.any(xs > cam.width_px) or np.any(ys < 0) or np.any(ys > cam.height_px):
        raise ValueError("pixel coordinates outside the raster")
    xt = (2.0 * xs / cam.width_px - 1.0) * cam.tan_half_h
    yt = (1.0 - 2.0 * ys / cam.height_px) * cam.tan_half_v
    forward, up, right = _camera_basis(principal)
    v = (
        forward[None, :]
        + xt.reshape(-1, 1) * right[None, :]
        + yt.reshape(-1, 1) * up[None, :]
    )
    norm = np.linalg.norm(v, axis=1)
    thetas = np.degrees(np.arcsin(np.clip(v[:, 2] / norm, -1.0, 1.0)))
    phis = np.degrees(np.arctan2(v[:, 1], v[:, 0])) % 360.0
    return thetas.reshape(xs.shape), phis.reshape(xs.shape)


def nfov_pixel_ray(cam: CameraModel, principal: Direction, px) -> Direction:
    """Sphere direction seen by one continuous raster coordinate (x, y)."""
    x, y = px
    thetas, phis = nfov_pixel_rays(cam, principal, [float(x)], [float(y)])
    return Direction(float(thetas[0]), float(phis[0]))


def nfov_project(cam: CameraModel, principal: Direction, d: Direction) -> tuple[float, float]:
    """Continuous raster coordinates at which ``d`` appears; gnomonic inverse.

    Raises if ``d`` lies on or behind the camera plane (no gnomonic image).
    The result may fall outside the raster when ``d`` is outside the FOV.
    """
    forward, up, right = _camera_basis(principal)
    v = d.as_vector()
    a = float(v @ forward)
    if a <= 0.0:
        raise ValueError("direction is behind the camera plane")
    xt = float(v @ right) / a
    yt = float(v @ up) / a
    x = (xt / cam.tan_half_h + 1.0) * cam.width_px / 2.0
    y = (1.0 - yt / cam.tan_half_v) * cam.height_px / 2.0
    return x, y


def equirect_px_from_angles(width: int, height: int, thetas, phis):
    """Vectorized equirectangular mapping: x = phi/360*W, y = (90-theta)/180*H."""
    xs = (np.asarray(phis, dtype=float) % 360.0) / 360.0 * width
    ys = (90.0 - np.asarray(thetas, dtype=float)) / 180.0 * height
    return xs, ys


def sphere_to_equirect_px(width: int, height: int, d: Direction) -> tuple[float, float]:
    """Continuous equirectangular pixel coordinates of a direction."""
    xs, ys = equirect_px_from_angles(width, height, d.theta, d.phi)
    return float(xs), float(ys)


def equirect_px_to_direction(width: int, height: int, x: float, y: float) -> Direction:
    """Inverse of sphere_to_equirect_px for y within [0, height]."""
    return Direction(90.0 - 180.0 * y / height, 360.0 * x / width)


def fov_outline(
    cam: CameraModel,
    principal: Direction,
    eq_width: int,
    eq_height: int,
    samples_per_edge: int = 16,
) -> list[np.ndarray]:
    """Backprojected FOV border in equirectangular pixel coordinates.

    Samples ``samples_per_edge`` points per raster edge (corner points are
    not duplicated), maps them through the camera and the equirectangular
    projection, and splits the closed outline into segments wherever
    consecutive points wrap across the phi = 0/360 seam, so a display can
    draw each segment as a plain polyline.
    """
    if samples_per_edge < 2:
        raise ValueError("samples_per_edge must be >= 2")
    w, h = float(cam.width_px), float(cam.height_px)
    ts = np.linspace(0.0, 1.0, samples_per_edge, endpoint=False)
    ones = np.ones_like(ts)
    border_x = np.concatenate([ts * w, w * ones, w - ts * w, 0.0 * ones])
    border_y = np.concatenate([0.0 * ones, ts * h, h * ones, h - ts * h])
    thetas, phis = nfov_pixel_rays(cam, principal, border_x, border_y)
    xs, ys = equirect_px_from_angles(eq_width, eq_height, thetas, phis)
    pts = np.column_stack([xs, ys])
    closed = np.vstack([pts, pts[:1]])

    segments: list[np.ndarray] = []
    start = 0
    for i in range(len(closed) - 1):
        if abs(closed[i + 1, 0] - closed[i, 0]) > eq_width / 2.0:
            segments.append(closed[start : i + 1])
            start = i + 1
    segments.append(closed[start:])
    return [seg for seg in segments if len(seg) >= 2]
