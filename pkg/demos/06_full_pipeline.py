"""End to end on a synthetic 360 video.

Synthesizes a panorama video with a bright moving blob, scores every
glimpse with the stand-in scorer, solves for the camera trajectory,
renders the virtual camera's NFOV output, and checks that the camera
followed the blob.
"""

from pathlib import Path

import numpy as np

from panocam import (
    CameraModel,
    Direction,
    EquirectImage,
    RenderJob,
    ScoreMap,
    angular_distance,
    build_grid,
    glimpse_clip,
    interpolate,
    render_video,
    solve_topk,
    standin_score,
)

OUT = Path(__file__).with_suffix("") / "out"
H, W, FPS, SECONDS = 90, 180, 2.0, 30.0

# Blob pans east along the equator at 6 degrees per second.
def blob_center(t: float) -> Direction:
    return Direction(0.0, 40.0 + 6.0 * t)

frames = []
yy = 90.0 - 180.0 * (np.arange(H) + 0.5) / H
xx = 360.0 * (np.arange(W) + 0.5) / W
for k in range(int(FPS * SECONDS)):
    c = blob_center(k / FPS)
    dphi = np.minimum(np.abs(xx - c.phi), 360.0 - np.abs(xx - c.phi))
    blob = np.exp(-((yy[:, None] - c.theta) ** 2 + dphi[None, :] ** 2) / (2 * 18.0**2))
    flicker = 0.25 * ((k % 2) == 0) * blob  # temporal energy for the scorer
    frames.append(EquirectImage(np.clip(0.05 + 0.7 * blob + flicker, 0, 1)))

grid = build_grid(SECONDS)
cam = CameraModel(width_px=96, height_px=72)
print(f"scoring {grid.n_glimpses} glimpses with the stand-in scorer...")
values = np.zeros(grid.shape)
for g in grid.glimpses():
    clip = glimpse_clip(frames, FPS, grid, g, cam)
    i, j = grid.indices_of(g.dir)
    values[g.t, i, j] = standin_score(clip)
# stand-in scores live in [0.5, 1); stretch to [0, 1] for the score map
values = (values - values.min()) / (values.max() - values.min())
scores = ScoreMap(grid, values, video_id="blob")

best = solve_topk(scores, epsilon=30.0, K=20)[0]
print("chosen directions:", [(g.dir.theta, g.dir.phi) for g in best.steps])

traj = interpolate(best, FPS, grid.interval)
rendered = render_video(RenderJob(tuple(frames), traj, cam, out_dir=OUT))
print(f"rendered {len(rendered)} NFOV frames to {OUT}")

errs = [
    angular_distance(traj.direction(k), blob_center((k + 0.5) / FPS))
    for k in range(traj.num_frames)
]
print(f"camera-to-blob angle: mean {np.mean(errs):.1f} deg, max {np.max(errs):.1f} deg "
      f"(lattice spacing is 20 deg)")
