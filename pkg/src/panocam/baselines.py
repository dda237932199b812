"""Non-learned trajectory generators used as comparison points.

Center performs a seeded Gaussian random walk from the panorama center;
Eye-level emits one static trajectory per lattice longitude on the equator;
the no-stitch sampler draws a glimpse independently at every time step from
the softmax of the capture-worthiness scores (no smoothness constraint).
A saliency-style baseline needs no code here: run the regular solver on a
score map produced by any external scorer.
"""

from __future__ import annotations

import numpy as np

from .grid import GlimpseGrid
from .scoring import ScoreMap
from .solver import DiscreteTrajectory

__all__ = ["center_baseline", "eye_level_baseline", "no_stitch_sample"]


def center_baseline(
    grid: GlimpseGrid,
    K: int = 20,
    sigma: float = 10.0,
    seed: int | None = None,
    return_raw: bool = False,
):
    """K random-motion trajectories biased toward the panorama center.

    Each trajectory starts at (0, 0); every later step draws latitude and
    longitude independently from Gaussians centered on the previous step
    (std ``sigma`` degrees), latitude clamped to [-90, 90], longitude
    wrapped. Steps are snapped to the nearest lattice cell; with
    ``return_raw`` the pre-snap continuous walk is returned alongside.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if seed is None:
        raise ValueError("center baseline is randomized and requires a seed")
    streams = np.random.SeedSequence(seed).spawn(K)
    trajs: list[DiscreteTrajectory] = []
    raws: list[np.ndarray] = []
    T = grid.num_steps
    for ss in streams:
        rng = np.random.default_rng(ss)
        raw = np.zeros((T, 2))
        for t in range(1, T):
            raw[t, 0] = np.clip(raw[t - 1, 0] + rng.normal(0.0, sigma), -90.0, 90.0)
            raw[t, 1] = (raw[t - 1, 1] + rng.normal(0.0, sigma)) % 360.0
        steps = tuple(
            grid.glimpse(t, *grid.nearest_cell(raw[t, 0], raw[t, 1])) for t in range(T)
        )
        trajs.append(DiscreteTrajectory(steps))
        raws.append(raw)
    return (trajs, raws) if return_raw else trajs


def eye_level_baseline(grid: GlimpseGrid) -> list[DiscreteTrajectory]:
    """One static trajectory per lattice longitude, pointed at the equator.

    With the default 20-degree longitude spacing this yields exactly 18
    trajectories, each constant across all time steps.
    """
    lats = np.asarray(grid.latitudes)
    hits = np.flatnonzero(np.abs(lats) < 1e-9)
    if len(hits) == 0:
        raise ValueError("grid has no eye-level (latitude 0) row")
    lat_idx = int(hits[0])
    return [
        DiscreteTrajectory(
            tuple(grid.glimpse(t, lat_idx, j) for t in range(grid.num_steps))
        )
        for j in range(grid.n_lon)
    ]


def no_stitch_sample(
    scores: ScoreMap,
    K: int = 20,
    temperature: float = 1.0,
    seed: int | None = None,
) -> list[DiscreteTrajectory]:
    """K trajectories sampled stepwise from softmax(scores / temperature).

    Every time step is drawn independently: maximum capture-worthiness
    greed, no smoothness constraint.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if seed is None:
        raise ValueError("no-stitch sampling is randomized and requires a seed")
    grid = scores.grid
    T = grid.num_steps
    n = grid.locations_per_step
    flat = scores.values.reshape(T, n)
    shifted = (flat - flat.max(axis=1, keepdims=True)) / temperature
    probs = np.exp(shifted)
    probs /= probs.sum(axis=1, keepdims=True)

    streams = np.random.SeedSequence(seed).spawn(K)
    trajs: list[DiscreteTrajectory] = []
    for ss in streams:
        rng = np.random.default_rng(ss)
        cells = [int(rng.choice(n, p=probs[t])) for t in range(T)]
        steps = tuple(grid.glimpse(t, *divmod(c, grid.n_lon)) for t, c in enumerate(cells))
        agg = float(sum(flat[t, c] for t, c in enumerate(cells)))
        trajs.append(DiscreteTrajectory(steps, aggregate_score=agg))
    return trajs
