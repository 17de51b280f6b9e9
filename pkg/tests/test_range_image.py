import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rangecluster import (
    PointCloud,
    ProjectionConfig,
    image_from_range_grid,
    project,
    unproject_labels,
)

KITTI = ProjectionConfig(rows=64, cols=2048, fov_up_deg=3.0, fov_down_deg=-25.0)


def cloud_of(*pts):
    arr = np.asarray(pts, dtype=np.float64)
    return PointCloud(xyz=arr, remission=np.zeros(len(arr)))


def test_empty_cloud_projects_to_empty_image():
    img = project(PointCloud.empty(), KITTI)
    assert not img.occupancy().any()
    assert (img.range < 0).all()


def test_single_point_straight_ahead():
    # (10, 0, 0): azimuth 0 maps to the image center column; elevation 0 is
    # 3/28 of the way down a 64-row grid -> row 6.
    img = project(cloud_of((10.0, 0.0, 0.0)), KITTI)
    occ = np.argwhere(img.occupancy())
    assert occ.shape == (1, 2)
    r, c = occ[0]
    assert (r, c) == (6, 1024)
    assert img.range[r, c] == pytest.approx(10.0)
    assert img.point_index[r, c] == 0
    assert img.proj_rows[0] == 6 and img.proj_cols[0] == 1024


def test_collision_nearest_wins():
    # Same beam, ranges 9 and 5: the 5 m return owns the pixel.
    img = project(cloud_of((9.0, 0.0, 0.0), (5.0, 0.0, 0.0)), KITTI)
    occ = np.argwhere(img.occupancy())
    assert occ.shape == (1, 2)
    r, c = occ[0]
    assert img.range[r, c] == pytest.approx(5.0)
    assert img.point_index[r, c] == 1
    # the loser still remembers the pixel it fell on
    assert img.proj_rows[0] == r and img.proj_cols[0] == c


def test_origin_points_dropped():
    img = project(cloud_of((0.0, 0.0, 0.0), (10.0, 0.0, 0.0)), KITTI)
    assert img.occupancy().sum() == 1
    assert img.proj_rows[0] == -1


def test_zero_size_grid_rejected():
    with pytest.raises(ValueError):
        ProjectionConfig(rows=0, cols=2048)
    with pytest.raises(ValueError):
        ProjectionConfig(rows=64, cols=0)


def test_nan_coordinates_rejected():
    with pytest.raises(ValueError):
        cloud_of((np.nan, 0.0, 0.0))


def test_unproject_all_zero_labels():
    img = project(cloud_of((10.0, 0.0, 0.0), (5.0, 3.0, 1.0)), KITTI)
    labels = np.zeros((KITTI.rows, KITTI.cols), dtype=np.int32)
    assert (unproject_labels(img, labels, 2) == 0).all()


def test_unproject_single_point():
    img = project(cloud_of((10.0, 0.0, 0.0)), KITTI)
    labels = np.zeros((KITTI.rows, KITTI.cols), dtype=np.int32)
    labels[6, 1024] = 7
    assert unproject_labels(img, labels, 1).tolist() == [7]


def test_unproject_collision_same_class_inherits():
    img = project(cloud_of((9.0, 0.0, 0.0), (5.0, 0.0, 0.0)), KITTI)
    labels = np.zeros((KITTI.rows, KITTI.cols), dtype=np.int32)
    r, c = np.argwhere(img.occupancy())[0]
    labels[r, c] = 3
    sem = np.array([10, 10])
    assert unproject_labels(img, labels, 2, semantics=sem).tolist() == [3, 3]


def test_unproject_collision_other_class_gets_zero():
    img = project(cloud_of((9.0, 0.0, 0.0), (5.0, 0.0, 0.0)), KITTI)
    labels = np.zeros((KITTI.rows, KITTI.cols), dtype=np.int32)
    r, c = np.argwhere(img.occupancy())[0]
    labels[r, c] = 3
    sem = np.array([40, 10])  # the occluded point is road, the winner a car
    assert unproject_labels(img, labels, 2, semantics=sem).tolist() == [0, 3]


def test_unproject_dimension_mismatch_rejected():
    img = project(cloud_of((10.0, 0.0, 0.0)), KITTI)
    with pytest.raises(ValueError):
        unproject_labels(img, np.zeros((4, 4), dtype=np.int32), 1)
    with pytest.raises(ValueError):
        unproject_labels(img, np.zeros((KITTI.rows, KITTI.cols), dtype=np.int32), 5)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_round_trip_one_point_per_pixel(seed):
    # Points on pixel-center rays occupy distinct pixels, so every point
    # gets its own label back with zero losses.
    rng = np.random.default_rng(seed)
    cfg = ProjectionConfig(rows=16, cols=64)
    n_pix = rng.integers(1, 40)
    flat = rng.choice(cfg.rows * cfg.cols, size=n_pix, replace=False)
    grid = np.zeros((cfg.rows, cfg.cols))
    grid[np.unravel_index(flat, grid.shape)] = rng.uniform(2.0, 50.0, n_pix)
    ref = image_from_range_grid(grid, cfg)

    img = project(ref.cloud, cfg)
    assert img.occupancy().sum() == n_pix
    labels = np.zeros((cfg.rows, cfg.cols), dtype=np.int32)
    labels[img.occupancy()] = np.arange(1, n_pix + 1)
    per_point = unproject_labels(img, labels, len(ref.cloud))
    assert (per_point > 0).all()
    assert np.unique(per_point).size == n_pix


@given(st.integers(0, 2**32 - 1), st.integers(1, 30))
@settings(max_examples=25, deadline=None)
def test_monotone_occupancy(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-20, 20, size=(n + 1, 3))
    pts = pts[np.linalg.norm(pts, axis=1) > 0.5]
    if len(pts) < 2:
        return
    cfg = ProjectionConfig(rows=8, cols=32)
    base = project(PointCloud(pts[:-1], np.zeros(len(pts) - 1)), cfg).occupancy().sum()
    grown = project(PointCloud(pts, np.zeros(len(pts))), cfg).occupancy().sum()
    assert base <= grown <= base + 1


def test_projection_deterministic():
    rng = np.random.default_rng(11)
    pts = rng.uniform(-30, 30, size=(500, 3))
    cloud = PointCloud(pts, np.zeros(500))
    a = project(cloud, KITTI)
    b = project(cloud, KITTI)
    assert np.array_equal(a.range, b.range)
    assert np.array_equal(a.point_index, b.point_index)
    assert np.array_equal(a.proj_rows, b.proj_rows)


def test_image_from_range_grid_consistent_with_project():
    grid = np.zeros((8, 16))
    grid[2, 5] = 7.0
    grid[4, 0] = 12.5
    ref = image_from_range_grid(grid)
    img = project(ref.cloud, ref.config)
    assert np.array_equal(img.occupancy(), ref.occupancy())
    assert np.allclose(img.range[img.occupancy()], ref.range[ref.occupancy()])
