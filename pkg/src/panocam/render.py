"""NFOV rendering from equirectangular frames.

For every output pixel center, the camera ray is backprojected to the
sphere, mapped to continuous equirectangular coordinates, and sampled
bilinearly with horizontal wraparound across the longitude seam and
vertical clamping at the poles. The whole raster is computed as one
vectorized gather, and frame-level parallelism is available; output is
bit-identical regardless of scheduling.

Frame I/O uses numbered lossless PNG files plus a JSON metadata sidecar
({fps, width, height, num_frames}); encoding to a video container is out of
process and out of scope.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .solver import ContinuousTrajectory
from .sphere import CameraModel, Direction, EquirectImage, equirect_px_from_angles, nfov_pixel_rays

__all__ = [
    "RenderJob",
    "sample_equirect",
    "render_frame",
    "render_video",
    "save_frames",
    "load_frames",
    "load_frame_metadata",
    "FRAME_PATTERN",
]

FRAME_PATTERN = "frame_{:06d}.png"


def sample_equirect(pixels: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Bilinear lookup at continuous coordinates, wrap in x, clamp in y.

    Pixel (i, j) has its center at (j + 0.5, i + 0.5).
    """
    h, w = pixels.shape[:2]
    fx = np.asarray(xs, dtype=float) - 0.5
    fy = np.asarray(ys, dtype=float) - 0.5
    x0 = np.floor(fx).astype(int)
    y0 = np.floor(fy).astype(int)
    wx = (fx - x0)[..., None] if pixels.ndim == 3 else fx - x0
    wy = (fy - y0)[..., None] if pixels.ndim == 3 else fy - y0
    x0m, x1m = x0 % w, (x0 + 1) % w
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)
    vals = pixels.astype(float)
    top = (1.0 - wx) * vals[y0c, x0m] + wx * vals[y0c, x1m]
    bot = (1.0 - wx) * vals[y1c, x0m] + wx * vals[y1c, x1m]
    return (1.0 - wy) * top + wy * bot


def render_frame(src, cam: CameraModel, principal: Direction) -> np.ndarray:
    """Render one NFOV frame; output dtype matches the source frame."""
    pixels = src.pixels if isinstance(src, EquirectImage) else np.asarray(src)
    if pixels.size == 0:
        raise ValueError("source frame is empty")
    h, w = pixels.shape[:2]
    ox = np.arange(cam.width_px) + 0.5
    oy = np.arange(cam.height_px) + 0.5
    gx, gy = np.meshgrid(ox, oy)
    thetas, phis = nfov_pixel_rays(cam, principal, gx, gy)
    xs, ys = equirect_px_from_angles(w, h, thetas, phis)
    out = sample_equirect(pixels, xs, ys)
    if np.issubdtype(pixels.dtype, np.integer):
        info = np.iinfo(pixels.dtype)
        return np.clip(np.rint(out), info.min, info.max).astype(pixels.dtype)
    return out.astype(pixels.dtype)


@dataclass(frozen=True)
class RenderJob:
    """A full virtual-camera render: source frames, the per-frame trajectory,
    the camera, and an optional output directory."""

    frames: tuple
    trajectory: ContinuousTrajectory
    cam: CameraModel
    out_dir: Path | None = None

    def __post_init__(self):
        if self.trajectory.num_frames > len(self.frames):
            raise ValueError(
                f"trajectory has {self.trajectory.num_frames} frames but only "
                f"{len(self.frames)} source frames are available"
            )
        object.__setattr__(self, "frames", tuple(self.frames))


def render_video(job: RenderJob, workers: int | None = None) -> list[np.ndarray]:
    """Render frame i of the job at trajectory direction i.

    ``workers`` > 1 renders frames in a thread pool; results are collected
    by index so the output is identical to a sequential render. When the
    job has an output directory the frames and metadata sidecar are written
    there as well.
    """
    n = job.trajectory.num_frames

    def one(i: int) -> np.ndarray:
        return render_frame(job.frames[i], job.cam, job.trajectory.direction(i))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(one, range(n)))
    else:
        out = [one(i) for i in range(n)]
    if job.out_dir is not None:
        save_frames(job.out_dir, out, job.trajectory.fps)
    return out


def save_frames(directory, frames, fps: float) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    height, width = np.asarray(frames[0]).shape[:2]
    for i, frame in enumerate(frames):
        arr = np.asarray(frame.pixels if isinstance(frame, EquirectImage) else frame)
        if not np.issubdtype(arr.dtype, np.integer):
            arr = np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
        Image.fromarray(arr).save(directory / FRAME_PATTERN.format(i))
    meta = {"fps": fps, "width": int(width), "height": int(height), "num_frames": len(frames)}
    with open(directory / "metadata.json", "w") as f:
        json.dump(meta, f, sort_keys=True, indent=2)
        f.write("\n")


def load_frame_metadata(directory) -> dict:
    with open(Path(directory) / "metadata.json") as f:
        meta = json.load(f)
    for key in ("fps", "width", "height", "num_frames"):
        if key not in meta:
            raise ValueError(f"metadata sidecar missing {key!r}")
    return meta


def load_frames(directory, as_equirect: bool = True):
    """Read numbered frames and the sidecar; returns (frames, metadata)."""
    directory = Path(directory)
    meta = load_frame_metadata(directory)
    frames = []
    for i in range(int(meta["num_frames"])):
        path = directory / FRAME_PATTERN.format(i)
        if not path.exists():
            raise FileNotFoundError(f"missing frame file {path}")
        arr = np.asarray(Image.open(path))
        frames.append(EquirectImage(arr) if as_equirect else arr)
    return frames, meta
