"""Capture-worthiness scoring.

Produces a score in [0, 1] for every lattice glimpse, by one of three routes:
ingesting a precomputed score file, evaluating a logistic model trained on
ingested feature vectors (positives: human-captured NFOV clips; negatives:
glimpses from other 360 videos, subsampled to twice the positive count,
leave-one-video-out), or the built-in stand-in scorer.

The stand-in scorer is a cheap luminance-contrast + motion-energy heuristic
for desk-scale runs, NOT a learned model; any external scorer (e.g. a
saliency method) can be evaluated instead by writing its scores to the score
file format.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .grid import GlimpseGrid

__all__ = [
    "ScoreMap",
    "FeatureSet",
    "WorthinessModel",
    "LogisticFit",
    "sigmoid",
    "fit_logistic",
    "load_score_map",
    "save_score_map",
    "load_feature_set",
    "save_feature_set",
    "assemble_training_set",
    "train_worthiness",
    "save_worthiness_model",
    "load_worthiness_model",
    "score_glimpses",
    "standin_score",
    "analyze_scores",
]


class ScoreMap:
    """Scores on the (T x |lat| x |lon|) glimpse lattice of one video."""

    def __init__(self, grid: GlimpseGrid, values, video_id: str = ""):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"score shape {values.shape} does not match grid {grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("scores must be finite")
        if values.min() < 0.0 or values.max() > 1.0:
            raise ValueError("scores must lie in [0, 1]")
        values = values.copy()
        values.flags.writeable = False
        self.grid = grid
        self.values = values
        self.video_id = video_id

    def score(self, t: int, lat_idx: int, lon_idx: int) -> float:
        return float(self.values[t, lat_idx, lon_idx])

    def score_of(self, g) -> float:
        i, j = self.grid.indices_of(g.dir)
        return float(self.values[g.t, i, j])


def save_score_map(path, sm: ScoreMap) -> None:
    doc = {
        "video_id": sm.video_id,
        "interval_seconds": sm.grid.interval,
        "latitudes": list(sm.grid.latitudes),
        "longitudes": list(sm.grid.longitudes),
        "scores": sm.values.tolist(),
    }
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def load_score_map(path, grid: GlimpseGrid) -> ScoreMap:
    """Read a score file and validate it against ``grid``.

    Values outside [0, 1] by at most 1e-6 are clamped with a warning;
    anything further out, non-finite, or missing a cell is an error.
    """
    with open(path) as f:
        doc = json.load(f)
    lats = tuple(float(v) for v in doc["latitudes"])
    lons = tuple(float(v) % 360.0 for v in doc["longitudes"])
    if lats != grid.latitudes or lons != grid.longitudes:
        raise ValueError(f"{path}: lattice angles do not match the requested grid")
    if abs(float(doc["interval_seconds"]) - grid.interval) > 1e-9:
        raise ValueError(f"{path}: interval {doc['interval_seconds']} != grid {grid.interval}")
    rows = doc["scores"]
    if len(rows) != grid.num_steps:
        raise ValueError(f"{path}: {len(rows)} time steps, grid expects {grid.num_steps}")
    for t, step in enumerate(rows):
        if len(step) != grid.n_lat or any(len(r) != grid.n_lon for r in step):
            raise ValueError(f"{path}: missing cells at time step {t}")
    values = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: non-finite score values")
    low, high = values.min(), values.max()
    if low < -1e-6 or high > 1.0 + 1e-6:
        raise ValueError(f"{path}: scores outside [0, 1] beyond tolerance ({low}..{high})")
    if low < 0.0 or high > 1.0:
        warnings.warn(f"{path}: scores outside [0, 1] by <= 1e-6 were clamped")
        values = np.clip(values, 0.0, 1.0)
    return ScoreMap(grid, values, video_id=str(doc.get("video_id", "")))


class FeatureSet:
    """Labeled fixed-length feature vectors, grouped by source video.

    The feature vectors are opaque ingested data (e.g. pooled activations of
    a pretrained video network); this package never extracts them itself.
    """

    def __init__(self, ids, video_ids, labels, vectors):
        X = np.asarray(vectors, dtype=float)
        if X.ndim != 2:
            raise ValueError("feature vectors must form an (N, D) matrix")
        n = X.shape[0]
        if not (len(ids) == len(video_ids) == len(labels) == n):
            raise ValueError("ids, video_ids, labels, vectors must have equal length")
        self.ids = [str(i) for i in ids]
        self.video_ids = [str(v) for v in video_ids]
        self.labels = [str(l) for l in labels]
        self.X = X

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def subset(self, mask_or_indices) -> "FeatureSet":
        idx = np.arange(len(self))[mask_or_indices]
        return FeatureSet(
            [self.ids[i] for i in idx],
            [self.video_ids[i] for i in idx],
            [self.labels[i] for i in idx],
            self.X[idx],
        )

    def relabeled(self, label: str) -> "FeatureSet":
        return FeatureSet(self.ids, self.video_ids, [label] * len(self), self.X)

    @staticmethod
    def concat(parts) -> "FeatureSet":
        parts = list(parts)
        return FeatureSet(
            sum((p.ids for p in parts), []),
            sum((p.video_ids for p in parts), []),
            sum((p.labels for p in parts), []),
            np.vstack([p.X for p in parts]),
        )


def save_feature_set(path, fs: FeatureSet) -> None:
    """Write the line-oriented feature format: first line is the dimension D,
    then one record per line as id,video_id,label,x1,...,xD."""
    with open(path, "w") as f:
        f.write(f"{fs.dim}\n")
        for i in range(len(fs)):
            vec = ",".join(repr(float(v)) for v in fs.X[i])
            f.write(f"{fs.ids[i]},{fs.video_ids[i]},{fs.labels[i]},{vec}\n")


def load_feature_set(path) -> FeatureSet:
    with open(path) as f:
        header = f.readline().strip()
        try:
            dim = int(header)
        except ValueError:
            raise ValueError(f"{path}: header line must be the feature dimension, got {header!r}")
        ids, vids, labels, rows = [], [], [], []
        for ln, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3 + dim:
                raise ValueError(f"{path}:{ln}: expected {3 + dim} fields, got {len(parts)}")
            ids.append(parts[0])
            vids.append(parts[1])
            labels.append(parts[2])
            rows.append([float(v) for v in parts[3:]])
    if not rows:
        raise ValueError(f"{path}: no records")
    return FeatureSet(ids, vids, labels, np.asarray(rows))


def sigmoid(z):
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class LogisticFit:
    """A fitted binary logistic model with its optimization trace."""

    weights: np.ndarray
    bias: float
    C: float
    loss_trace: list[float] = field(default_factory=list)
    n_iter: int = 0
    converged: bool = False

    def decision(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision(X))

    def data_loss(self, X, y) -> float:
        z = self.decision(X)
        return float(np.sum(np.logaddexp(0.0, z) - np.asarray(y, dtype=float) * z))


def fit_logistic(X, y, C: float = 1.0, tol: float = 1e-6, max_iter: int = 10_000) -> LogisticFit:
    """L2-regularized logistic regression by damped Newton descent.

    Minimizes sum log-loss + ||w||^2 / (2C), bias unpenalized, full batch,
    until the gradient 2-norm is <= ``tol`` or ``max_iter`` iterations.
    Deterministic: zero start, exact Newton step with backtracking line
    search, so the logged loss trace is non-increasing.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise ValueError("X must be (N, D) with one label per row")
    if C <= 0:
        raise ValueError("C must be positive")
    n, d = X.shape
    theta = np.zeros(d + 1)

    def objective(th):
        z = X @ th[:d] + th[d]
        return float(np.sum(np.logaddexp(0.0, z) - y * z) + th[:d] @ th[:d] / (2.0 * C))

    fit = LogisticFit(weights=theta[:d], bias=0.0, C=C)
    J = objective(theta)
    for it in range(max_iter):
        fit.loss_trace.append(J)
        z = X @ theta[:d] + theta[d]
        p = sigmoid(z)
        g = np.empty(d + 1)
        g[:d] = X.T @ (p - y) + theta[:d] / C
        g[d] = np.sum(p - y)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            fit.converged = True
            break
        r = p * (1.0 - p)
        H = np.empty((d + 1, d + 1))
        H[:d, :d] = X.T @ (X * r[:, None]) + np.eye(d) / C
        H[:d, d] = H[d, :d] = X.T @ r
        H[d, d] = np.sum(r)
        H[np.diag_indices_from(H)] += 1e-12
        step = np.linalg.solve(H, -g)
        slope = float(g @ step)
        t = 1.0
        for _ in range(60):
            J_new = objective(theta + t * step)
            if J_new <= J + 1e-4 * t * slope:
                break
            t *= 0.5
        theta = theta + t * step
        J = J_new
        fit.n_iter = it + 1
    fit.weights = theta[:d].copy()
    fit.bias = float(theta[d])
    return fit


@dataclass
class WorthinessModel:
    """Logistic capture-worthiness classifier over ingested feature vectors."""

    weights: np.ndarray
    bias: float
    C: float
    loss_trace: list[float] = field(default_factory=list)

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(np.asarray(X, dtype=float) @ self.weights + self.bias)


def save_worthiness_model(path, model: WorthinessModel) -> None:
    doc = {"weights": model.weights.tolist(), "bias": model.bias, "C": model.C}
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def load_worthiness_model(path) -> WorthinessModel:
    with open(path) as f:
        doc = json.load(f)
    return WorthinessModel(np.asarray(doc["weights"], dtype=float), float(doc["bias"]), float(doc["C"]))


def assemble_training_set(
    humancam: FeatureSet,
    glimpses: FeatureSet,
    heldout_video: str,
    seed: int,
) -> FeatureSet:
    """Training set for one leave-one-video-out worthiness model.

    Positives are all human-captured clips; negatives are glimpses from
    360 videos other than ``heldout_video``, subsampled uniformly (seeded)
    to exactly twice the positive count.
    """
    if humancam.dim != glimpses.dim:
        raise ValueError("positive and candidate feature dimensions differ")
    positives = humancam.relabeled("positive")
    keep = [i for i, v in enumerate(glimpses.video_ids) if v != str(heldout_video)]
    need = 2 * len(positives)
    if len(keep) < need:
        raise ValueError(
            f"insufficient negatives: need {need}, have {len(keep)} "
            f"(short by {need - len(keep)})"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(keep), size=need, replace=False)
    negatives = glimpses.subset([keep[i] for i in chosen]).relabeled("negative")
    return FeatureSet.concat([positives, negatives])


def train_worthiness(data: FeatureSet, C: float = 1.0) -> WorthinessModel:
    """Fit the capture-worthiness classifier on a positive/negative set."""
    if len(data) < 2:
        raise ValueError("need at least two records")
    present = set(data.labels)
    if present != {"positive", "negative"}:
        raise ValueError(f"need both 'positive' and 'negative' labels, got {sorted(present)}")
    y = np.array([1.0 if l == "positive" else 0.0 for l in data.labels])
    fit = fit_logistic(data.X, y, C=C)
    return WorthinessModel(fit.weights, fit.bias, C, loss_trace=fit.loss_trace)


def score_glimpses(model: WorthinessModel, glimpse_features: FeatureSet, grid: GlimpseGrid) -> ScoreMap:
    """Positive-class probability of every lattice glimpse.

    Record ids must be glimpse linear indices (decimal strings, t-major /
    latitude / longitude order), exactly one record per lattice cell.
    """
    n = grid.n_glimpses
    X = np.full((n, glimpse_features.dim), np.nan)
    seen = np.zeros(n, dtype=bool)
    video_id = glimpse_features.video_ids[0] if len(glimpse_features) else ""
    for k, rid in enumerate(glimpse_features.ids):
        try:
            idx = int(rid)
        except ValueError:
            raise ValueError(f"glimpse record id {rid!r} is not a lattice linear index")
        if not 0 <= idx < n:
            raise ValueError(f"glimpse record id {idx} outside lattice 0..{n - 1}")
        if seen[idx]:
            raise ValueError(f"duplicate feature record for glimpse {idx}")
        seen[idx] = True
        X[idx] = glimpse_features.X[k]
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise ValueError(f"missing feature record for glimpse {missing} "
                         f"({int((~seen).sum())} cells uncovered)")
    probs = model.predict_proba(X).reshape(grid.shape)
    return ScoreMap(grid, probs, video_id=video_id)


def standin_score(clip, alpha: float = 8.0, beta: float = 16.0) -> float:
    """Deterministic stand-in capture-worthiness for desk-scale runs.

    sigmoid(alpha * spatial luminance contrast + beta * mean absolute
    temporal difference), computed on intensities normalized to [0, 1].
    Both energies are >= 0, so the score lives in [0.5, 1) with 0.5 for a
    constant clip. This is a documented heuristic, not a learned model.
    """
    clip = np.asarray(clip)
    if clip.size == 0 or clip.ndim < 3:
        raise ValueError("clip must be a non-empty (frames, H, W[, C]) array")
    was_int = np.issubdtype(clip.dtype, np.integer)
    luma = clip.astype(float) / (255.0 if was_int else 1.0)
    if luma.ndim == 4:
        luma = luma.mean(axis=3)
    contrast = float(np.mean(np.std(luma, axis=(1, 2))))
    if luma.shape[0] > 1:
        tdiff = float(np.mean(np.abs(np.diff(luma, axis=0))))
    else:
        tdiff = 0.0
    return float(sigmoid(alpha * contrast + beta * tdiff))


def analyze_scores(maps, hi: float = 0.95, lo: float = 0.05, bins: int = 20) -> dict:
    """Score distribution report: value histogram plus the fraction of
    capture-worthy (>= hi) and non-capture-worthy (<= lo) glimpses per
    latitude and per longitude."""
    maps = list(maps)
    if not maps:
        raise ValueError("need at least one score map")
    if hi <= lo:
        raise ValueError(f"hi ({hi}) must exceed lo ({lo})")
    lats = maps[0].grid.latitudes
    lons = maps[0].grid.longitudes
    for m in maps[1:]:
        if m.grid.latitudes != lats or m.grid.longitudes != lons:
            raise ValueError("all score maps must share one lattice")
    stacked = np.concatenate([m.values.reshape(-1, len(lats), len(lons)) for m in maps])
    counts, edges = np.histogram(stacked, bins=bins, range=(0.0, 1.0))

    def fractions(axis_keep):
        other = tuple(a for a in range(3) if a != axis_keep)
        cw = (stacked >= hi).mean(axis=other)
        ncw = (stacked <= lo).mean(axis=other)
        return cw.tolist(), ncw.tolist()

    lat_cw, lat_ncw = fractions(1)
    lon_cw, lon_ncw = fractions(2)
    return {
        "hi": hi,
        "lo": lo,
        "num_glimpses": int(stacked.size),
        "histogram": {"bin_edges": edges.tolist(), "counts": counts.tolist()},
        "by_latitude": {
            "latitudes": list(lats),
            "capture_worthy": lat_cw,
            "non_capture_worthy": lat_ncw,
        },
        "by_longitude": {
            "longitudes": list(lons),
            "capture_worthy": lon_cw,
            "non_capture_worthy": lon_ncw,
        },
    }
