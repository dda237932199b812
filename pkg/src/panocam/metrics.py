"""Evaluation metrics for generated camera trajectories.

Two families:

* Trajectory-similarity metrics against human-edited trajectories of the
  same 360 video: frame-wise cosine between principal axes, and an FOV
  overlap proxy max(1 - dOmega/FOV, 0), each pooled per trajectory
  (best-matched human over the whole video) or per frame (best human at
  every frame). All values are reported as similarities, higher = closer,
  so the pooling over humans is a max where a distance formulation would
  take a min.

* Classifier-based metrics against generic human-captured footage in an
  ingested feature space: distinguishability (cross-validated error of a
  human-vs-generated classifier; higher error = less distinguishable =
  better), human-likeness ranking across methods (normalized mean rank by
  classifier decision value, lower = better), and transferability of a
  4-way semantic classifier between the generated and human domains.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .scoring import FeatureSet, fit_logistic
from .solver import ContinuousTrajectory

__all__ = [
    "SimilarityMeasure",
    "resample",
    "framewise_similarity",
    "pool",
    "consistency_report",
    "distinguishability",
    "humancam_likeness",
    "transferability",
    "format_table",
]


@dataclass(frozen=True)
class SimilarityMeasure:
    """Frame-wise similarity: 'cosine' of principal axes or FOV 'overlap'."""

    kind: str = "cosine"
    fov: float = 65.5

    def __post_init__(self):
        if self.kind not in ("cosine", "overlap"):
            raise ValueError(f"unknown similarity kind {self.kind!r}")
        if self.kind == "overlap" and self.fov <= 0:
            raise ValueError("overlap requires a positive fov")


def _unit_vectors(traj: ContinuousTrajectory) -> np.ndarray:
    t = np.radians(traj.thetas)
    p = np.radians(traj.phis)
    return np.column_stack([np.cos(t) * np.cos(p), np.cos(t) * np.sin(p), np.sin(t)])


def resample(traj: ContinuousTrajectory, fps: float) -> ContinuousTrajectory:
    """Nearest-frame resampling to a common comparison rate."""
    if fps <= 0:
        raise ValueError("fps must be positive")
    if abs(fps - traj.fps) < 1e-12:
        return traj
    duration = traj.num_frames / traj.fps
    n = max(1, round(duration * fps))
    src = np.clip(
        np.round((np.arange(n) + 0.5) / fps * traj.fps - 0.5).astype(int),
        0,
        traj.num_frames - 1,
    )
    return ContinuousTrajectory(fps=fps, thetas=traj.thetas[src], phis=traj.phis[src])


def _aligned_vectors(a: ContinuousTrajectory, b: ContinuousTrajectory):
    na, nb = a.num_frames, b.num_frames
    if abs(na - nb) > 1:
        raise ValueError(f"frame counts differ by more than one: {na} vs {nb}")
    va, vb = _unit_vectors(a), _unit_vectors(b)
    if na != nb:
        n = max(na, nb)

        def stretch(v):
            if len(v) == n:
                return v
            idx = np.round(np.linspace(0, len(v) - 1, n)).astype(int)
            return v[idx]

        va, vb = stretch(va), stretch(vb)
    return va, vb


def framewise_similarity(
    a: ContinuousTrajectory, b: ContinuousTrajectory, m: SimilarityMeasure
) -> np.ndarray:
    """Per-frame similarity between two equal-rate trajectories.

    Frame counts may differ by at most one (the shorter is resampled by
    nearest frame). Cosine is the dot product of unit principal axes;
    overlap is max(1 - dOmega/fov, 0) with dOmega the great-circle angle.
    """
    va, vb = _aligned_vectors(a, b)
    # 1 - |va-vb|^2/2 equals the dot product for unit vectors but is exact
    # for identical frames and more accurate near 1.
    dots = np.clip(1.0 - 0.5 * np.sum((va - vb) ** 2, axis=1), -1.0, 1.0)
    if m.kind == "cosine":
        return dots
    cross = np.linalg.norm(np.cross(va, vb), axis=1)
    ang = np.degrees(np.arctan2(cross, dots))
    return np.maximum(1.0 - ang / m.fov, 0.0)


def pool(
    gen: ContinuousTrajectory,
    humans,
    m: SimilarityMeasure,
    pooling: str = "trajectory",
) -> float:
    """Pool frame-wise similarities against a set of human trajectories.

    trajectory pooling: best single human over the whole video
    (max over humans of the mean over frames); frame pooling: best human at
    every frame (mean over frames of the max over humans).
    """
    humans = list(humans)
    if not humans:
        raise ValueError("need at least one human trajectory")
    if pooling not in ("trajectory", "frame"):
        raise ValueError(f"unknown pooling {pooling!r}")
    sims = np.stack([framewise_similarity(gen, h, m) for h in humans])
    if pooling == "trajectory":
        return float(sims.mean(axis=1).max())
    return float(sims.max(axis=0).mean())


def consistency_report(humans_by_annotator: dict) -> dict:
    """Cross-annotator consistency of human-edited trajectories.

    Each trajectory is pooled against all trajectories of *other* annotators
    (same-annotator pairs are excluded), for both measures and both
    poolings; the report carries the four mean values.
    """
    annotators = sorted(humans_by_annotator)
    if len(annotators) < 2:
        raise ValueError("consistency needs at least two annotators")
    measures = {"cosine": SimilarityMeasure("cosine"), "overlap": SimilarityMeasure("overlap")}
    sums = {(mk, pk): [] for mk in measures for pk in ("trajectory", "frame")}
    for ann in annotators:
        others = [
            t
            for other, trajs in humans_by_annotator.items()
            if other != ann
            for t in trajs
        ]
        for traj in humans_by_annotator[ann]:
            for mk, m in measures.items():
                for pk in ("trajectory", "frame"):
                    sums[(mk, pk)].append(pool(traj, others, m, pk))
    return {
        mk: {pk: float(np.mean(sums[(mk, pk)])) for pk in ("trajectory", "frame")}
        for mk in measures
    }


def _grouped_folds(groups: list[str], folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Record-index folds with all records of one group in the same fold."""
    uniq = sorted(set(groups))
    order = rng.permutation(len(uniq))
    assignment = {}
    for slot, chunk in enumerate(np.array_split(order, folds)):
        for gi in chunk:
            assignment[uniq[gi]] = slot
    idx = np.arange(len(groups))
    return [idx[[assignment[g] == f for g in groups]] for f in range(folds)]


def distinguishability(
    gen: FeatureSet, human: FeatureSet, folds: int = 5, seed: int = 0, C: float = 1.0
) -> float:
    """Cross-validated error of a human-vs-generated classifier.

    Negatives (generated clips) are split by source 360 video so train and
    test negatives never share a video; positives are split uniformly at
    random with the same seed. Returns the mean test error rate; higher
    means the generated clips are harder to tell apart, which is better.
    """
    if len(gen) == 0 or len(human) == 0:
        raise ValueError("both feature sets must be non-empty")
    n_videos = len(set(gen.video_ids))
    if n_videos < folds:
        raise ValueError(f"need >= {folds} distinct 360-video ids, got {n_videos}")
    rng = np.random.default_rng(seed)
    neg_folds = _grouped_folds(gen.video_ids, folds, rng)
    pos_perm = rng.permutation(len(human))
    pos_folds = np.array_split(pos_perm, folds)

    errors = []
    for f in range(folds):
        neg_test = set(neg_folds[f].tolist())
        pos_test = set(pos_folds[f].tolist())
        Xtr = np.vstack(
            [
                human.X[[i for i in range(len(human)) if i not in pos_test]],
                gen.X[[i for i in range(len(gen)) if i not in neg_test]],
            ]
        )
        ytr = np.concatenate(
            [
                np.ones(len(human) - len(pos_test)),
                np.zeros(len(gen) - len(neg_test)),
            ]
        )
        Xte = np.vstack([human.X[sorted(pos_test)], gen.X[sorted(neg_test)]])
        yte = np.concatenate([np.ones(len(pos_test)), np.zeros(len(neg_test))])
        model = fit_logistic(Xtr, ytr, C=C)
        pred = (model.decision(Xte) > 0).astype(float)
        errors.append(float(np.mean(pred != yte)))
    return float(np.mean(errors))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """0-based ranks of descending values; ties share their average rank."""
    order = np.argsort(-values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0
        i = j + 1
    return ranks


def humancam_likeness(per_method_gen: dict, human: FeatureSet, C: float = 1.0) -> dict:
    """Normalized mean rank of each method's clips by human-likeness.

    Per held-out 360 video: a classifier is trained on all human clips as
    positives and every method's clips from the *other* videos as
    negatives; the held-out video's clips from all methods are then ranked
    jointly by decision value (most human-like first). Each method's
    normalized mean rank in [0, 1] is averaged across videos; lower is
    better. A method with no clips for some video is skipped there with a
    warning.
    """
    methods = sorted(per_method_gen)
    if len(methods) < 2:
        raise ValueError("ranking needs at least two methods")
    videos = sorted({v for m in methods for v in per_method_gen[m].video_ids})
    per_method_ranks: dict[str, list[float]] = {m: [] for m in methods}
    for vid in videos:
        train_parts = [human.X]
        train_labels = [np.ones(len(human))]
        test_X, test_method = [], []
        for m in methods:
            fs = per_method_gen[m]
            mask = np.array([v == vid for v in fs.video_ids])
            if not mask.any():
                warnings.warn(f"method {m!r} has no clips for video {vid!r}; skipped there")
            else:
                test_X.append(fs.X[mask])
                test_method.extend([m] * int(mask.sum()))
            if (~mask).any():
                train_parts.append(fs.X[~mask])
                train_labels.append(np.zeros(int((~mask).sum())))
        if len(set(test_method)) < 2:
            continue
        model = fit_logistic(np.vstack(train_parts), np.concatenate(train_labels), C=C)
        values = model.decision(np.vstack(test_X))
        n = len(values)
        normalized = _average_ranks(values) / (n - 1) if n > 1 else np.zeros(n)
        test_method = np.array(test_method)
        for m in set(test_method.tolist()):
            per_method_ranks[m].append(float(normalized[test_method == m].mean()))
    return {m: float(np.mean(r)) for m, r in per_method_ranks.items() if r}


def transferability(source: FeatureSet, target: FeatureSet, C: float = 1.0) -> float:
    """Accuracy of a one-vs-rest multi-class classifier trained on the
    source domain and tested on the target domain."""
    classes = sorted(set(source.labels))
    if set(target.labels) != set(classes):
        raise ValueError(
            f"label alphabets differ: {classes} vs {sorted(set(target.labels))}"
        )
    decisions = np.column_stack(
        [
            fit_logistic(source.X, np.array([1.0 if l == c else 0.0 for l in source.labels]), C=C)
            .decision(target.X)
            for c in classes
        ]
    )
    pred = np.argmax(decisions, axis=1)
    truth = np.array([classes.index(l) for l in target.labels])
    return float(np.mean(pred == truth))


def format_table(rows: list[list], headers: list[str]) -> str:
    """Aligned-column text table for report files and CLI output."""
    cells = [[str(h) for h in headers]] + [
        [f"{v:.3f}" if isinstance(v, float) else str(v) for v in row] for row in rows
    ]
    widths = [max(len(r[c]) for r in cells) for c in range(len(headers))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
