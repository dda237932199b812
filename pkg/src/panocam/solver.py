"""Camera trajectory selection.

A trajectory picks one glimpse per time step under a smooth-motion
constraint: consecutive steps may differ by at most epsilon degrees in
latitude and (wrapped) longitude. Among feasible trajectories the solver
maximizes the aggregate capture-worthiness score with a single dynamic
program over the lattice; the optimal trajectory ending at every terminal
cell falls out of one pass, and the top K by aggregate score are returned.

Discrete trajectories jump between directions every interval; linear
interpolation (latitude linear, longitude along the shorter wrap direction,
keypoints at interval centers, ends held constant) turns them into per-frame
continuous trajectories.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .grid import GlimpseGrid, STGlimpse
from .scoring import ScoreMap
from .sphere import Direction, signed_longitude_delta, wrapped_delta

__all__ = [
    "DiscreteTrajectory",
    "ContinuousTrajectory",
    "solve_topk",
    "interpolate",
    "save_trajectory",
    "load_trajectory",
    "save_trajectory_set",
    "load_trajectory_set",
]


@dataclass(frozen=True)
class DiscreteTrajectory:
    """One glimpse choice per time step plus the aggregate score (None when
    the generator had no score map, e.g. some baselines)."""

    steps: tuple[STGlimpse, ...]
    aggregate_score: float | None = None

    def __post_init__(self):
        steps = tuple(self.steps)
        if not steps:
            raise ValueError("trajectory must have at least one step")
        if [g.t for g in steps] != list(range(len(steps))):
            raise ValueError("steps must cover t = 0..T-1 in order")
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    def directions(self) -> list[Direction]:
        return [g.dir for g in self.steps]

    def max_step(self) -> tuple[float, float]:
        """Largest (|dtheta|, wrapped |dphi|) over consecutive pairs."""
        if len(self.steps) == 1:
            return 0.0, 0.0
        deltas = [wrapped_delta(a.dir, b.dir) for a, b in zip(self.steps, self.steps[1:])]
        return max(d[0] for d in deltas), max(d[1] for d in deltas)

    def satisfies_motion_limit(self, epsilon: float) -> bool:
        dt, dp = self.max_step()
        return dt <= epsilon + 1e-9 and dp <= epsilon + 1e-9

    def recompute_aggregate(self, scores: ScoreMap) -> float:
        return float(sum(scores.score_of(g) for g in self.steps))


@dataclass(frozen=True)
class ContinuousTrajectory:
    """One camera direction per output frame at a fixed frame rate."""

    fps: float
    thetas: np.ndarray
    phis: np.ndarray

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float).copy()
        phis = np.asarray(self.phis, dtype=float) % 360.0
        if thetas.shape != phis.shape or thetas.ndim != 1 or len(thetas) == 0:
            raise ValueError("thetas and phis must be equal-length non-empty 1-D arrays")
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if thetas.min() < -90.0 or thetas.max() > 90.0:
            raise ValueError("latitudes outside [-90, 90]")
        thetas.flags.writeable = False
        phis.flags.writeable = False
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "phis", phis)

    @property
    def num_frames(self) -> int:
        return len(self.thetas)

    def direction(self, frame: int) -> Direction:
        return Direction(float(self.thetas[frame]), float(self.phis[frame]))


def _motion_tables(grid: GlimpseGrid, epsilon: float):
    """Per-target-cell predecessor lists, sorted by the tie-break key.

    Key: (|dtheta| + wrapped |dphi|, |lat|, lat, lon) of the predecessor, so
    np.argmax over Accum values in this order picks the smoothest, most
    eye-level predecessor among ties. Returns (padded predecessor index
    matrix, validity mask).
    """
    lats = np.asarray(grid.latitudes)
    lons = np.asarray(grid.longitudes)
    n_lat, n_lon = len(lats), len(lons)
    n = n_lat * n_lon
    cell_lat = np.repeat(lats, n_lon)
    cell_lon = np.tile(lons, n_lat)
    dtheta = np.abs(cell_lat[:, None] - cell_lat[None, :])
    raw = np.abs(cell_lon[:, None] - cell_lon[None, :]) % 360.0
    dphi = np.minimum(raw, 360.0 - raw)
    cost = dtheta + dphi
    feasible = (dtheta <= epsilon + 1e-9) & (dphi <= epsilon + 1e-9)

    ordered_preds = []
    for j in range(n):
        cand = np.flatnonzero(feasible[:, j])
        ordered_preds.append(
            sorted(cand, key=lambda i: (cost[i, j], abs(cell_lat[i]), cell_lat[i], cell_lon[i]))
        )
    max_deg = max(len(p) for p in ordered_preds)
    pred = np.zeros((n, max_deg), dtype=int)
    valid = np.zeros((n, max_deg), dtype=bool)
    for j, ordered in enumerate(ordered_preds):
        pred[j, : len(ordered)] = ordered
        valid[j, : len(ordered)] = True
    return pred, valid


def solve_topk(scores: ScoreMap, epsilon: float = 30.0, K: int = 20) -> list[DiscreteTrajectory]:
    """Top-K maximum-aggregate-score trajectories under the motion limit.

    One forward dynamic-programming pass computes, for every terminal cell,
    the best trajectory ending there (accumulated scores at intermediate
    steps are shared); the K largest aggregates are returned, sorted
    non-increasing. Ties break toward smooth, eye-level, low-longitude
    paths, deterministically and independently of any parallel schedule.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    grid = scores.grid
    T = grid.num_steps
    n = grid.locations_per_step
    flat = scores.values.reshape(T, n)

    pred, valid = _motion_tables(grid, epsilon)
    accum = flat[0].copy()
    back = np.zeros((T, n), dtype=int)
    neg_inf = -np.inf
    for t in range(1, T):
        cand = np.where(valid, accum[pred], neg_inf)
        k = np.argmax(cand, axis=1)  # first max respects tie-break order
        best_pred = pred[np.arange(n), k]
        back[t] = best_pred
        accum = cand[np.arange(n), k] + flat[t]

    lats = np.asarray(grid.latitudes)
    cell_lat = np.repeat(lats, grid.n_lon)
    cell_lon = np.tile(np.asarray(grid.longitudes), grid.n_lat)
    terminal_order = sorted(
        range(n),
        key=lambda c: (-accum[c], abs(cell_lat[c]), cell_lat[c], cell_lon[c]),
    )
    if K > n:
        warnings.warn(f"K={K} exceeds the {n} terminal cells; returning all {n}")
        K = n

    out: list[DiscreteTrajectory] = []
    for c in terminal_order[:K]:
        cells = [0] * T
        cells[T - 1] = c
        for t in range(T - 1, 0, -1):
            cells[t - 1] = int(back[t, cells[t]])
        steps = tuple(
            grid.glimpse(t, *divmod(cells[t], grid.n_lon)) for t in range(T)
        )
        out.append(DiscreteTrajectory(steps, aggregate_score=float(accum[c])))
    return out


def interpolate(traj: DiscreteTrajectory, fps: float, interval: float) -> ContinuousTrajectory:
    """Per-frame trajectory: linear between keypoints at interval centers.

    Latitude interpolates linearly; longitude along the shorter wrap
    direction; before the first and after the last keypoint the direction is
    held constant. Frame i carries the direction at media time (i + 0.5)/fps.
    """
    if fps <= 0:
        raise ValueError("fps must be positive")
    if interval <= 0:
        raise ValueError("interval must be positive")
    T = len(traj)
    key_t = (np.arange(T) + 0.5) * interval
    key_theta = np.array([g.dir.theta for g in traj.steps])
    key_phi = np.array([g.dir.phi for g in traj.steps])
    unwrapped = np.concatenate(
        [[key_phi[0]], key_phi[0] + np.cumsum(signed_longitude_delta(key_phi[:-1], key_phi[1:]))]
    ) if T > 1 else key_phi.copy()

    n_frames = round(T * interval * fps)
    frame_t = (np.arange(n_frames) + 0.5) / fps
    thetas = np.interp(frame_t, key_t, key_theta)
    phis = np.interp(frame_t, key_t, unwrapped) % 360.0
    return ContinuousTrajectory(fps=fps, thetas=thetas, phis=phis)


def _traj_doc(traj, video_id: str, interval: float | None, extra: dict | None) -> dict:
    if isinstance(traj, DiscreteTrajectory):
        if interval is None:
            raise ValueError("discrete trajectories need interval_seconds")
        doc = {
            "video_id": video_id,
            "kind": "discrete",
            "interval_seconds": interval,
            "entries": [
                {"t": g.t, "theta": g.dir.theta, "phi": g.dir.phi} for g in traj.steps
            ],
        }
        if traj.aggregate_score is not None:
            doc["aggregate_score"] = traj.aggregate_score
    elif isinstance(traj, ContinuousTrajectory):
        doc = {
            "video_id": video_id,
            "kind": "continuous",
            "fps": traj.fps,
            "entries": [
                {"frame": i, "theta": float(traj.thetas[i]), "phi": float(traj.phis[i])}
                for i in range(traj.num_frames)
            ],
        }
    else:
        raise TypeError(f"not a trajectory: {type(traj)!r}")
    if extra:
        doc.update(extra)
    return doc


def _traj_from_doc(doc: dict):
    kind = doc.get("kind")
    entries = doc["entries"]
    if kind == "discrete":
        steps = tuple(
            STGlimpse(int(e["t"]), Direction(float(e["theta"]), float(e["phi"])))
            for e in sorted(entries, key=lambda e: e["t"])
        )
        agg = doc.get("aggregate_score")
        return DiscreteTrajectory(steps, None if agg is None else float(agg))
    if kind == "continuous":
        entries = sorted(entries, key=lambda e: e["frame"])
        if [e["frame"] for e in entries] != list(range(len(entries))):
            raise ValueError("continuous entries must cover frames 0..N-1")
        return ContinuousTrajectory(
            fps=float(doc["fps"]),
            thetas=np.array([e["theta"] for e in entries]),
            phis=np.array([e["phi"] for e in entries]),
        )
    raise ValueError(f"unknown trajectory kind {kind!r}")


def _atomic_write_json(path, doc: dict) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")
    os.replace(tmp, path)


def save_trajectory(path, traj, video_id: str = "", interval: float | None = None, extra: dict | None = None) -> None:
    """Write one trajectory in the standard schema (atomic write-then-rename)."""
    _atomic_write_json(path, _traj_doc(traj, video_id, interval, extra))


def load_trajectory(path):
    """Read one trajectory; returns DiscreteTrajectory or ContinuousTrajectory
    plus the raw document (for video_id and any extra fields)."""
    with open(path) as f:
        doc = json.load(f)
    return _traj_from_doc(doc), doc


def save_trajectory_set(path, trajs, video_id: str = "", interval: float | None = None) -> None:
    """Write several trajectories of one video into a single document."""
    doc = {
        "video_id": video_id,
        "trajectories": [_traj_doc(t, video_id, interval, None) for t in trajs],
    }
    _atomic_write_json(path, doc)


def load_trajectory_set(path):
    with open(path) as f:
        doc = json.load(f)
    if "trajectories" in doc:
        return [_traj_from_doc(d) for d in doc["trajectories"]], doc
    return [_traj_from_doc(doc)], doc
