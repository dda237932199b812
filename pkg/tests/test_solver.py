import numpy as np
import pytest

from panocam.grid import GlimpseGrid, build_grid
from panocam.scoring import ScoreMap
from panocam.solver import (
    ContinuousTrajectory,
    DiscreteTrajectory,
    interpolate,
    load_trajectory,
    load_trajectory_set,
    save_trajectory,
    save_trajectory_set,
    solve_topk,
)
from panocam.sphere import Direction, wrapped_delta
from panocam.grid import STGlimpse

REDUCED_LATS = (-20.0, -10.0, 0.0, 10.0, 20.0)
REDUCED_LONS = tuple(float(p) for p in range(0, 160, 20))


def reduced_grid(T=4):
    return GlimpseGrid(T, REDUCED_LATS, REDUCED_LONS, 5.0)


def brute_force_best(values: np.ndarray, grid: GlimpseGrid, epsilon: float) -> float:
    """Exhaustive enumeration of all feasible paths, expanded breadth-first.

    Independent of the DP: it keeps the score of every partial path alive and
    never collapses them per cell, so the final max really ranges over every
    feasible trajectory.
    """
    lats = np.repeat(np.asarray(grid.latitudes), grid.n_lon)
    lons = np.tile(np.asarray(grid.longitudes), grid.n_lat)
    dtheta = np.abs(lats[:, None] - lats[None, :])
    raw = np.abs(lons[:, None] - lons[None, :]) % 360.0
    dphi = np.minimum(raw, 360.0 - raw)
    feasible = (dtheta <= epsilon + 1e-9) & (dphi <= epsilon + 1e-9)
    successors = [np.flatnonzero(feasible[i]) for i in range(len(lats))]

    T = grid.num_steps
    flat = values.reshape(T, -1)
    path_scores = flat[0].copy()
    path_ends = np.arange(flat.shape[1])
    for t in range(1, T):
        counts = np.array([len(successors[c]) for c in path_ends])
        new_ends = np.concatenate([successors[c] for c in path_ends])
        new_scores = np.repeat(path_scores, counts) + flat[t][new_ends]
        path_scores, path_ends = new_scores, new_ends
    return float(path_scores.max())


def test_top1_matches_brute_force_on_seeded_maps():
    grid = reduced_grid()
    for seed in range(10):
        values = np.random.default_rng(seed).random(grid.shape)
        sm = ScoreMap(grid, values)
        top = solve_topk(sm, epsilon=30.0, K=1)[0]
        assert top.aggregate_score == pytest.approx(
            brute_force_best(values, grid, 30.0), abs=1e-9
        )
        assert top.recompute_aggregate(sm) == pytest.approx(top.aggregate_score, abs=1e-9)


def test_top1_matches_brute_force_across_the_longitude_seam():
    # longitudes straddling the 0/360 seam: wraparound edges must be feasible
    grid = GlimpseGrid(3, (0.0,), (0.0, 20.0, 340.0), 5.0)
    values = np.zeros(grid.shape)
    values[0, 0, 2] = 0.9   # start at 340
    values[1, 0, 0] = 0.8   # hop across the seam to 0
    values[2, 0, 1] = 0.7   # then to 20
    sm = ScoreMap(grid, values)
    top = solve_topk(sm, epsilon=30.0, K=1)[0]
    assert top.aggregate_score == pytest.approx(2.4, abs=1e-12)
    assert [g.dir.phi for g in top.steps] == [340.0, 0.0, 20.0]
    assert top.aggregate_score == pytest.approx(brute_force_best(values, grid, 30.0), abs=1e-12)


def test_degenerate_single_step_takes_argmax():
    grid = build_grid(5)
    values = np.random.default_rng(1).random(grid.shape)
    sm = ScoreMap(grid, values)
    top = solve_topk(sm, K=1)[0]
    assert len(top.steps) == 1
    assert top.aggregate_score == pytest.approx(values.max())


def test_all_equal_scores_tie_break_to_stationary_center():
    grid = build_grid(30)
    sm = ScoreMap(grid, np.full(grid.shape, 0.25))
    top = solve_topk(sm, epsilon=30.0, K=1)[0]
    for g in top.steps:
        assert (g.dir.theta, g.dir.phi) == (0.0, 0.0)


def test_topk_sorted_and_motion_feasible():
    grid = build_grid(120)  # T = 24
    values = np.random.default_rng(2).random(grid.shape)
    sm = ScoreMap(grid, values)
    trajs = solve_topk(sm, epsilon=30.0, K=20)
    assert len(trajs) == 20
    aggs = [t.aggregate_score for t in trajs]
    assert aggs == sorted(aggs, reverse=True)
    for t in trajs:
        assert t.satisfies_motion_limit(30.0)
        for a, b in zip(t.steps, t.steps[1:]):
            dt, dp = wrapped_delta(a.dir, b.dir)
            assert dt <= 30.0 + 1e-9 and dp <= 30.0 + 1e-9


def test_topk_valid_against_candidate_pool_size():
    grid = build_grid(15)
    sm = ScoreMap(grid, np.random.default_rng(3).random(grid.shape))
    with pytest.warns(UserWarning):
        everything = solve_topk(sm, K=10_000)
    assert len(everything) == 198


def test_top1_beats_random_feasible_walks():
    grid = reduced_grid(6)
    values = np.random.default_rng(4).random(grid.shape)
    sm = ScoreMap(grid, values)
    best = solve_topk(sm, epsilon=30.0, K=1)[0].aggregate_score

    lats = np.repeat(np.asarray(grid.latitudes), grid.n_lon)
    lons = np.tile(np.asarray(grid.longitudes), grid.n_lat)
    dtheta = np.abs(lats[:, None] - lats[None, :])
    raw = np.abs(lons[:, None] - lons[None, :]) % 360.0
    feasible = (dtheta <= 30.0 + 1e-9) & (np.minimum(raw, 360.0 - raw) <= 30.0 + 1e-9)
    deg = feasible.sum(axis=1)
    succ = np.zeros((len(lats), deg.max()), dtype=int)
    for i in range(len(lats)):
        succ[i, : deg[i]] = np.flatnonzero(feasible[i])

    rng = np.random.default_rng(5)
    n_walks = 100_000
    flat = values.reshape(grid.num_steps, -1)
    cells = rng.integers(0, len(lats), size=n_walks)
    scores = flat[0][cells]
    for t in range(1, grid.num_steps):
        pick = (rng.random(n_walks) * deg[cells]).astype(int)
        cells = succ[cells, pick]
        scores += flat[t][cells]
    assert best >= scores.max() - 1e-9


def test_constant_shift_changes_aggregates_by_t_times_c():
    grid = reduced_grid(5)
    rng = np.random.default_rng(6)
    values = rng.random(grid.shape) * 0.5
    base = solve_topk(ScoreMap(grid, values), K=5)
    shifted = solve_topk(ScoreMap(grid, values + 0.3), K=5)
    for a, b in zip(base, shifted):
        assert b.aggregate_score == pytest.approx(a.aggregate_score + 5 * 0.3, abs=1e-9)
        assert [s.dir for s in a.steps] == [s.dir for s in b.steps]


def test_interpolate_linear_ramp():
    traj = DiscreteTrajectory(
        (STGlimpse(0, Direction(0, 0)), STGlimpse(1, Direction(0, 30)))
    )
    ct = interpolate(traj, fps=1, interval=5)
    assert ct.num_frames == 10
    assert ct.phis[2:8].tolist() == [0.0, 6.0, 12.0, 18.0, 24.0, 30.0]
    assert ct.phis[0] == 0.0 and ct.phis[-1] == 30.0  # held ends


def test_interpolate_wraps_along_shorter_arc():
    traj = DiscreteTrajectory(
        (STGlimpse(0, Direction(0, 350)), STGlimpse(1, Direction(0, 10)))
    )
    ct = interpolate(traj, fps=1, interval=5)
    assert ct.phis[3:7].tolist() == [354.0, 358.0, 2.0, 6.0]
    assert not np.any((ct.phis > 90) & (ct.phis < 270))


def test_interpolate_single_keypoint_constant():
    traj = DiscreteTrajectory((STGlimpse(0, Direction(20, 45)),))
    ct = interpolate(traj, fps=10, interval=5)
    assert ct.num_frames == 50
    assert np.all(ct.thetas == 20.0) and np.all(ct.phis == 45.0)


def test_interpolate_passes_through_keypoints_and_bounds_step():
    rng = np.random.default_rng(8)
    grid = build_grid(40)
    sm = ScoreMap(grid, rng.random(grid.shape))
    traj = solve_topk(sm, K=1)[0]
    fps, interval = 3.0, 5.0  # fps*interval odd puts frame centers on keypoints
    ct = interpolate(traj, fps, interval)
    # keypoint k sits at frame index (k + 0.5)*interval*fps - 0.5 when integral
    for k, g in enumerate(traj.steps):
        idx = round((k + 0.5) * interval * fps - 0.5)
        assert ct.thetas[idx] == pytest.approx(g.dir.theta, abs=1e-12)
        dphi = abs(ct.phis[idx] - g.dir.phi) % 360
        assert min(dphi, 360 - dphi) == pytest.approx(0.0, abs=1e-12)
    max_dt, max_dp = traj.max_step()
    frame_dt = np.abs(np.diff(ct.thetas))
    raw = np.abs(np.diff(ct.phis)) % 360.0
    frame_dp = np.minimum(raw, 360.0 - raw)
    assert frame_dt.max() <= max_dt / (interval * fps) + 1e-9
    assert frame_dp.max() <= max_dp / (interval * fps) + 1e-9


def test_interpolate_rejects_bad_fps():
    traj = DiscreteTrajectory((STGlimpse(0, Direction(0, 0)),))
    with pytest.raises(ValueError):
        interpolate(traj, fps=0, interval=5)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        DiscreteTrajectory(())
    with pytest.raises(ValueError):
        DiscreteTrajectory((STGlimpse(1, Direction(0, 0)),))
    with pytest.raises(ValueError):
        ContinuousTrajectory(0.0, np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        ContinuousTrajectory(1.0, np.array([100.0]), np.array([0.0]))


def test_trajectory_file_round_trip(tmp_path):
    traj = DiscreteTrajectory(
        (STGlimpse(0, Direction(0, 340)), STGlimpse(1, Direction(10, 0))),
        aggregate_score=1.25,
    )
    p = tmp_path / "traj.json"
    save_trajectory(p, traj, video_id="vid", interval=5.0)
    loaded, doc = load_trajectory(p)
    assert loaded == traj
    assert doc["video_id"] == "vid"
    assert doc["interval_seconds"] == 5.0

    ct = interpolate(traj, fps=2, interval=5)
    p2 = tmp_path / "cont.json"
    save_trajectory(p2, ct, video_id="vid")
    loaded2, doc2 = load_trajectory(p2)
    assert loaded2.fps == 2
    assert np.allclose(loaded2.thetas, ct.thetas)
    assert np.allclose(loaded2.phis, ct.phis)


def test_trajectory_set_round_trip(tmp_path):
    grid = reduced_grid(3)
    sm = ScoreMap(grid, np.random.default_rng(9).random(grid.shape))
    trajs = solve_topk(sm, K=4)
    p = tmp_path / "set.json"
    save_trajectory_set(p, trajs, video_id="vid", interval=grid.interval)
    loaded, doc = load_trajectory_set(p)
    assert loaded == trajs
    assert doc["video_id"] == "vid"
