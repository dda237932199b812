import numpy as np
import pytest

from panocam.grid import build_grid
from panocam.scoring import (
    FeatureSet,
    ScoreMap,
    analyze_scores,
    assemble_training_set,
    fit_logistic,
    load_feature_set,
    load_score_map,
    save_feature_set,
    save_score_map,
    score_glimpses,
    sigmoid,
    standin_score,
    train_worthiness,
)

SMALL_LATS = (-10.0, 0.0, 10.0)
SMALL_LONS = (0.0, 90.0, 180.0, 270.0)


def small_grid(duration=10.0):
    return build_grid(duration, interval=5, latitudes=SMALL_LATS, longitudes=SMALL_LONS)


def test_score_map_validates_shape_and_range():
    grid = small_grid()
    ScoreMap(grid, np.zeros(grid.shape))
    with pytest.raises(ValueError):
        ScoreMap(grid, np.zeros((1, 3, 4)))
    bad = np.zeros(grid.shape)
    bad[0, 0, 0] = 1.5
    with pytest.raises(ValueError):
        ScoreMap(grid, bad)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        ScoreMap(grid, bad)


def test_score_map_file_round_trip(tmp_path):
    grid = small_grid()
    values = np.random.default_rng(0).random(grid.shape)
    path = tmp_path / "scores.json"
    save_score_map(path, ScoreMap(grid, values, video_id="vid7"))
    loaded = load_score_map(path, grid)
    assert loaded.video_id == "vid7"
    assert np.array_equal(loaded.values, values)
    assert loaded.values.size == 2 * 12


def test_score_map_load_clamps_tiny_overshoot(tmp_path):
    import json

    grid = small_grid(5.0)
    doc = {
        "video_id": "v",
        "interval_seconds": 5.0,
        "latitudes": list(grid.latitudes),
        "longitudes": list(grid.longitudes),
        "scores": np.zeros(grid.shape).tolist(),
    }
    doc["scores"][0][0][0] = 1.0000003
    path = tmp_path / "close.json"
    path.write_text(json.dumps(doc))
    with pytest.warns(UserWarning):
        sm = load_score_map(path, grid)
    assert sm.values[0, 0, 0] == 1.0

    doc["scores"][0][0][0] = 1.001
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        load_score_map(path, grid)


def test_score_map_load_rejects_missing_cell(tmp_path):
    import json

    grid = small_grid(5.0)
    doc = {
        "video_id": "v",
        "interval_seconds": 5.0,
        "latitudes": list(grid.latitudes),
        "longitudes": list(grid.longitudes),
        "scores": np.zeros(grid.shape).tolist(),
    }
    doc["scores"][0][1] = doc["scores"][0][1][:-1]
    path = tmp_path / "short.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        load_score_map(path, grid)


def test_feature_set_file_round_trip(tmp_path):
    fs = FeatureSet(
        ids=["a", "b"],
        video_ids=["v1", "v2"],
        labels=["positive", "negative"],
        vectors=[[1.0, -2.5, 0.125], [0.0, 3.0, 7.5]],
    )
    path = tmp_path / "features.txt"
    save_feature_set(path, fs)
    loaded = load_feature_set(path)
    assert loaded.ids == fs.ids
    assert loaded.video_ids == fs.video_ids
    assert loaded.labels == fs.labels
    assert np.array_equal(loaded.X, fs.X)
    assert path.read_text().splitlines()[0] == "3"


def test_feature_set_rejects_bad_row(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\nid,vid,pos,1.0\n")
    with pytest.raises(ValueError):
        load_feature_set(path)


def make_features(rng, n, dim, video_ids, label):
    return FeatureSet(
        ids=[f"r{i}" for i in range(n)],
        video_ids=[video_ids[i % len(video_ids)] for i in range(n)],
        labels=[label] * n,
        vectors=rng.normal(size=(n, dim)),
    )


def test_assemble_training_set_counts_and_leave_one_out():
    rng = np.random.default_rng(1)
    humancam = make_features(rng, 100, 4, ["h1", "h2"], "clip")
    glimpses = make_features(rng, 1000, 4, [f"v{i}" for i in range(10)], "glimpse")
    data = assemble_training_set(humancam, glimpses, heldout_video="v3", seed=42)
    assert len(data) == 300
    assert data.labels.count("positive") == 100
    assert data.labels.count("negative") == 200
    negatives = [data.video_ids[i] for i in range(len(data)) if data.labels[i] == "negative"]
    assert "v3" not in negatives


def test_assemble_training_set_deterministic_and_shortfall():
    rng = np.random.default_rng(2)
    humancam = make_features(rng, 20, 3, ["h"], "clip")
    glimpses = make_features(rng, 200, 3, ["a", "b"], "glimpse")
    one = assemble_training_set(humancam, glimpses, "zzz", seed=5)
    two = assemble_training_set(humancam, glimpses, "zzz", seed=5)
    assert one.ids == two.ids
    small = make_features(rng, 30, 3, ["a"], "glimpse")
    with pytest.raises(ValueError, match="short by"):
        assemble_training_set(humancam, small, "zzz", seed=5)


def test_train_separable_points_perfect_accuracy():
    data = FeatureSet(["a", "b"], ["v", "v"], ["positive", "negative"], [[1.0], [-1.0]])
    model = train_worthiness(data)
    probs = model.predict_proba(data.X)
    assert probs[0] > 0.5 > probs[1]


def test_train_mirror_symmetric_data_has_zero_bias():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 5))
    data = FeatureSet(
        [f"p{i}" for i in range(80)],
        ["v"] * 80,
        ["positive"] * 40 + ["negative"] * 40,
        np.vstack([X, -X]),
    )
    model = train_worthiness(data)
    assert abs(model.bias) < 1e-6


def test_train_calibration_matches_positive_rate():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(300, 6))
    labels = ["positive" if rng.random() < 0.3 else "negative" for _ in range(300)]
    data = FeatureSet([str(i) for i in range(300)], ["v"] * 300, labels, X)
    model = train_worthiness(data)
    rate = labels.count("positive") / 300
    assert model.predict_proba(X).mean() == pytest.approx(rate, abs=0.05)


def test_train_rejects_single_class():
    data = FeatureSet(["a", "b"], ["v", "v"], ["positive", "positive"], [[1.0], [2.0]])
    with pytest.raises(ValueError):
        train_worthiness(data)


def test_loss_trace_non_increasing():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(100, 4))
    y = (X @ np.array([1.0, -2.0, 0.5, 0.0]) + rng.normal(size=100) > 0).astype(float)
    fit = fit_logistic(X, y)
    assert fit.converged
    trace = fit.loss_trace
    assert all(a >= b - 1e-12 for a, b in zip(trace, trace[1:]))


def test_weaker_regularization_never_increases_data_loss():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] > 0).astype(float)
    losses = [fit_logistic(X, y, C=c).data_loss(X, y) for c in (0.1, 1.0, 10.0, 100.0)]
    assert all(a >= b - 1e-9 for a, b in zip(losses, losses[1:]))


def test_score_glimpses_sigmoid_and_order_invariance():
    grid = small_grid()
    n = grid.n_glimpses
    rng = np.random.default_rng(7)
    X = rng.normal(size=(n, 3))
    from panocam.scoring import WorthinessModel

    model = WorthinessModel(np.zeros(3), 0.0, 1.0)
    fs = FeatureSet([str(i) for i in range(n)], ["v"] * n, ["glimpse"] * n, X)
    sm = scoremap = score_glimpses(model, fs, grid)
    assert np.allclose(scoremap.values, 0.5)

    model2 = WorthinessModel(np.array([2.0, -1.0, 0.5]), 0.25, 1.0)
    direct = score_glimpses(model2, fs, grid)
    perm = rng.permutation(n)
    shuffled = FeatureSet(
        [str(i) for i in perm], ["v"] * n, ["glimpse"] * n, X[perm]
    )
    assert np.array_equal(score_glimpses(model2, shuffled, grid).values, direct.values)

    big = WorthinessModel(np.array([100.0, 0.0, 0.0]), 1000.0, 1.0)
    assert score_glimpses(big, fs, grid).values.min() > 0.999999


def test_score_glimpses_matches_training_predictions_exactly():
    rng = np.random.default_rng(8)
    grid = small_grid(5.0)
    n = grid.n_glimpses
    X = rng.normal(size=(n, 4))
    labels = ["positive" if i % 3 == 0 else "negative" for i in range(n)]
    data = FeatureSet([str(i) for i in range(n)], ["v"] * n, labels, X)
    model = train_worthiness(data)
    sm = score_glimpses(model, data, grid)
    assert np.array_equal(sm.values.reshape(-1), model.predict_proba(X))


def test_score_glimpses_missing_cell_errors():
    grid = small_grid(5.0)
    from panocam.scoring import WorthinessModel

    n = grid.n_glimpses
    fs = FeatureSet([str(i) for i in range(n - 1)], ["v"] * (n - 1), ["g"] * (n - 1), np.zeros((n - 1, 2)))
    with pytest.raises(ValueError, match="missing"):
        score_glimpses(WorthinessModel(np.zeros(2), 0.0, 1.0), fs, grid)


def test_standin_score_baseline_and_monotonicity():
    black = np.zeros((5, 8, 16))
    assert standin_score(black) == pytest.approx(0.5)
    flat = np.full((5, 8, 16), 0.5)
    assert standin_score(flat) == pytest.approx(0.5)
    checker = np.zeros((5, 8, 16))
    checker[:, ::2, ::2] = 1.0
    assert standin_score(checker) > standin_score(flat)
    assert standin_score(checker) == standin_score(checker)
    with pytest.raises(ValueError):
        standin_score(np.zeros((0, 4, 4)))


def test_standin_score_rewards_motion():
    rng = np.random.default_rng(9)
    static = np.tile(rng.random((1, 8, 16)), (6, 1, 1))
    moving = rng.random((6, 8, 16))
    assert standin_score(moving) > standin_score(static)


def test_analyze_scores_all_ones():
    grid = small_grid()
    report = analyze_scores([ScoreMap(grid, np.ones(grid.shape))])
    assert report["by_latitude"]["capture_worthy"] == [1.0, 1.0, 1.0]
    assert report["by_latitude"]["non_capture_worthy"] == [0.0, 0.0, 0.0]


def test_analyze_scores_eye_level_peak():
    grid = small_grid()
    values = np.zeros(grid.shape)
    values[:, SMALL_LATS.index(0.0), :] = 1.0
    report = analyze_scores([ScoreMap(grid, values)])
    lat_cw = report["by_latitude"]["capture_worthy"]
    assert lat_cw[SMALL_LATS.index(0.0)] == 1.0
    assert lat_cw[0] == lat_cw[2] == 0.0
    lon_cw = report["by_longitude"]["capture_worthy"]
    assert len(set(lon_cw)) == 1  # flat across longitude


def test_analyze_scores_rejects_inverted_thresholds():
    grid = small_grid()
    with pytest.raises(ValueError):
        analyze_scores([ScoreMap(grid, np.zeros(grid.shape))], hi=0.4, lo=0.6)


def test_sigmoid_extremes():
    assert sigmoid(np.array([-800.0, 0.0, 800.0])).tolist() == [0.0, 0.5, 1.0]
