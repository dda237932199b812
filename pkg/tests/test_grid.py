import numpy as np
import pytest

from panocam.grid import (
    DEFAULT_LATITUDES,
    DEFAULT_LONGITUDES,
    GlimpseGrid,
    build_grid,
    glimpse_clip,
)
from panocam.sphere import CameraModel, Direction, EquirectImage


def test_default_lattice_size():
    assert len(DEFAULT_LATITUDES) == 11
    assert len(DEFAULT_LONGITUDES) == 18
    grid = build_grid(5)
    assert grid.num_steps == 1
    assert grid.n_glimpses == 198


def test_build_grid_sixty_seconds():
    grid = build_grid(60)
    assert grid.num_steps == 12
    assert grid.n_glimpses == len(list(grid.glimpses())) == 2376


def test_build_grid_drops_trailing_partial_interval():
    assert build_grid(14.9).num_steps == 2


def test_build_grid_too_short_errors():
    with pytest.raises(ValueError):
        build_grid(4.9, interval=5)


def test_enumeration_order_and_linear_round_trip():
    grid = build_grid(15)
    seen = set()
    for idx, g in enumerate(grid.glimpses()):
        i, j = grid.indices_of(g.dir)
        assert grid.linear_index(g.t, i, j) == idx
        assert grid.cell_from_linear(idx) == (g.t, i, j)
        assert (g.t, g.dir.theta, g.dir.phi) not in seen
        seen.add((g.t, g.dir.theta, g.dir.phi))
    # t-major, then latitude ascending, then longitude ascending
    glimpses = list(grid.glimpses())
    assert [g.t for g in glimpses] == sorted(g.t for g in glimpses)
    first_step = [g for g in glimpses if g.t == 0]
    assert [g.dir.theta for g in first_step] == sorted(g.dir.theta for g in first_step)


def test_grid_rejects_unsorted_latitudes():
    with pytest.raises(ValueError):
        GlimpseGrid(1, latitudes=(10.0, 0.0), longitudes=(0.0, 20.0))


def test_nearest_cell_snapping():
    grid = build_grid(5)
    assert grid.nearest_cell(3.0, 349.0) == (grid.latitudes.index(0.0), grid.longitudes.index(340.0))
    assert grid.nearest_cell(3.0, 351.0) == (grid.latitudes.index(0.0), grid.longitudes.index(0.0))
    assert grid.nearest_cell(-72.0, 9.0) == (grid.latitudes.index(-75.0), grid.longitudes.index(0.0))


def make_frames(n, value=0.25, h=32, w=64):
    return [EquirectImage(np.full((h, w), value)) for _ in range(n)]


def test_glimpse_clip_frame_count():
    grid = build_grid(5)
    cam = CameraModel(65.5, 4 / 3, 40, 30)
    clip = glimpse_clip(make_frames(150), 30.0, grid, grid.glimpse(0, 5, 0), cam)
    assert clip.shape == (150, 30, 40)


def test_glimpse_clip_constant_color():
    grid = build_grid(5)
    cam = CameraModel(65.5, 4 / 3, 40, 30)
    clip = glimpse_clip(make_frames(10, value=0.7), 2.0, grid, grid.glimpse(0, 5, 9), cam)
    assert np.allclose(clip, 0.7)


def test_glimpse_clip_missing_frames_errors():
    grid = build_grid(10)
    cam = CameraModel(65.5, 4 / 3, 40, 30)
    with pytest.raises(ValueError):
        glimpse_clip(make_frames(149), 30.0, grid, grid.glimpse(0, 0, 0), cam)


def test_glimpse_clip_marker_lands_at_center():
    # marker block surrounding the equirect point of (0, 180); center pixel of
    # an odd-sized raster samples exactly there
    h, w = 90, 180
    pixels = np.zeros((h, w))
    pixels[h // 2 - 1 : h // 2 + 1, w // 2 - 1 : w // 2 + 1] = 1.0
    frames = [EquirectImage(pixels)] * 5
    grid = build_grid(5, interval=5)
    cam = CameraModel(65.5, 4 / 3, 41, 31)
    g = grid.glimpse(0, grid.latitudes.index(0.0), grid.longitudes.index(180.0))
    clip = glimpse_clip(frames, 1.0, grid, g, cam)
    assert clip[0, 31 // 2, 41 // 2] == pytest.approx(1.0)
