import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rangecluster import (
    AngleCondition,
    PointCloud,
    ProjectionConfig,
    SeedList,
    VoxelGridConfig,
    always_connected,
    compute_pair_conditions,
    ConditionParams,
    image_from_range_grid,
    local_cluster,
    project,
    select_seeds,
)


def row_image(ranges, width=8):
    """Single-row grid padded with empty columns so azimuth steps stay sane."""
    ranges = np.asarray(ranges, dtype=float)
    padded = np.zeros(max(width, len(ranges)))
    padded[: len(ranges)] = ranges
    return image_from_range_grid(padded[None, :])


# ---------------------------------------------------------------- seeds


def test_select_seeds_empty_mask():
    cloud = PointCloud(np.array([[5.0, 0.0, 0.0]]), np.zeros(1))
    img = project(cloud, ProjectionConfig())
    seeds = select_seeds(cloud, img, np.zeros(1, bool), VoxelGridConfig(0.5))
    assert len(seeds) == 0


def test_select_seeds_one_voxel_one_seed():
    pts = np.array([[0.30, 0.10, 0.10], [0.35, 0.20, 0.15], [0.40, 0.15, 0.05]])
    cloud = PointCloud(pts, np.zeros(3))
    img = project(cloud, ProjectionConfig())
    assert img.occupancy().sum() == 3  # distinct pixels
    seeds = select_seeds(cloud, img, np.ones(3, bool), VoxelGridConfig(0.5))
    assert len(seeds) == 1
    # representative is the smallest point index in the voxel
    assert (seeds.pixels[0] == [img.proj_rows[0], img.proj_cols[0]]).all()


def test_select_seeds_two_voxels():
    pts = np.array([[0.1, 0.1, 0.1], [0.9, 0.1, 0.1]])
    cloud = PointCloud(pts, np.zeros(2))
    img = project(cloud, ProjectionConfig())
    seeds = select_seeds(cloud, img, np.ones(2, bool), VoxelGridConfig(0.5))
    assert len(seeds) == 2


def test_voxel_edge_must_be_positive():
    with pytest.raises(ValueError):
        VoxelGridConfig(0.0)
    with pytest.raises(ValueError):
        VoxelGridConfig(-0.5)


def test_select_seeds_mask_length_checked():
    cloud = PointCloud(np.array([[5.0, 0.0, 0.0]]), np.zeros(1))
    img = project(cloud, ProjectionConfig())
    with pytest.raises(ValueError):
        select_seeds(cloud, img, np.ones(3, bool), VoxelGridConfig(0.5))


# ---------------------------------------------------------- expansion


def test_single_seed_claims_whole_region():
    img = row_image([4.0, 4.0, 4.0, 4.0])
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0]])), always_connected, wrap=False
    )
    assert labels[0, :4].tolist() == [1, 1, 1, 1]
    assert labels[0, 4:].tolist() == [0, 0, 0, 0]
    assert votes.m == 1
    assert votes.v_plus.sum() == 0 and votes.v_minus.sum() == 0


def test_two_seeds_one_region_positive_votes():
    # Hand trace (round robin, wrap off): the two fronts meet between
    # columns 1 and 2; each side scans the boundary pair once.
    img = row_image([4.0, 4.0, 4.0, 4.0])
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0], [0, 3]])), always_connected, wrap=False
    )
    assert labels[0, :4].tolist() == [1, 1, 2, 2]
    assert votes.v_plus.tolist() == [[0, 2], [2, 0]]
    assert votes.v_minus.sum() == 0


def test_two_plateaus_negative_votes():
    # 5 m and 50 m plateaus: the 5<->50 boundary fails the angle test on
    # both scans, everything else passes.
    img = row_image([5.0, 5.0, 5.0, 50.0, 50.0, 50.0])
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0], [0, 5]])), AngleCondition(10.0), wrap=False
    )
    assert labels[0, :6].tolist() == [1, 1, 1, 2, 2, 2]
    assert votes.v_plus.sum() == 0
    assert votes.v_minus.tolist() == [[0, 2], [2, 0]]


def test_undecided_contact_becomes_negative_vote():
    # Label 1 hits the discontinuity while column 2 is still unlabeled;
    # label 2 claims it one round later. The parked pair converts to one
    # extra symmetric minus vote after the queues drain.
    img = row_image([5.0, 5.0, 50.0, 50.0, 50.0])
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0], [0, 4]])), AngleCondition(10.0), wrap=False
    )
    assert labels[0, :5].tolist() == [1, 1, 2, 2, 2]
    assert stats.undecided_pairs == 1
    assert votes.v_minus.tolist() == [[0, 2], [2, 0]]
    assert votes.v_plus.sum() == 0


def test_unreachable_pixels_stay_zero():
    img = row_image([5.0, 5.0, 50.0, 50.0])
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0]])), AngleCondition(10.0), wrap=False
    )
    assert labels[0, :4].tolist() == [1, 1, 0, 0]


def test_masked_out_pixels_are_empty():
    img = row_image([4.0, 4.0, 4.0, 4.0])
    active = np.zeros((1, 8), bool)
    active[0, [0, 1, 3]] = True
    labels, votes, stats = local_cluster(
        img, SeedList(np.array([[0, 0]])), always_connected, active=active, wrap=False
    )
    assert labels[0, :4].tolist() == [1, 1, 0, 0]


def test_wraparound_connects_image_edges():
    img = row_image([4.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0])
    labels, _, _ = local_cluster(
        img, SeedList(np.array([[0, 0]])), always_connected, wrap=True
    )
    assert labels[0].tolist() == [1, 1, 0, 0, 0, 0, 0, 1]


def test_seed_on_empty_pixel_rejected():
    img = row_image([4.0, 0.0, 4.0, 4.0])
    with pytest.raises(ValueError):
        local_cluster(img, SeedList(np.array([[0, 1]])), always_connected)


def test_duplicate_seeds_rejected():
    img = row_image([4.0, 4.0, 4.0, 4.0])
    with pytest.raises(ValueError):
        local_cluster(img, SeedList(np.array([[0, 0], [0, 0]])), always_connected)


# ----------------------------------------------------------- properties


def random_grid(rng, rows=12, cols=24):
    """Smooth plateaus with random holes: realistic condition mixes."""
    grid = np.full((rows, cols), 8.0)
    for _ in range(rng.integers(1, 4)):
        r0, c0 = rng.integers(0, rows), rng.integers(0, cols)
        h, w = rng.integers(2, rows), rng.integers(2, cols)
        grid[r0 : r0 + h, c0 : c0 + w] = rng.uniform(3.0, 60.0)
    grid[rng.random((rows, cols)) < 0.2] = 0.0
    return grid


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_labels_conserved_and_reachable(seed):
    rng = np.random.default_rng(seed)
    grid = random_grid(rng)
    img = image_from_range_grid(grid)
    occ = np.argwhere(img.occupancy())
    if occ.shape[0] == 0:
        return
    k = int(rng.integers(1, min(8, occ.shape[0]) + 1))
    pick = rng.choice(occ.shape[0], size=k, replace=False)
    seeds = SeedList(occ[pick])
    cond = AngleCondition(10.0)
    labels, votes, stats = local_cluster(img, seeds, cond)

    # conservation: only labels 0..m, labeled pixels are occupied
    assert labels.min() >= 0 and labels.max() <= k
    assert not (labels[~img.occupancy()] != 0).any()

    # reachability oracle: multi-source BFS over condition-true edges
    params = ConditionParams.from_projection(img.config)
    cr, cd = compute_pair_conditions(img, cond, params, img.occupancy(), wrap=True)
    reach = np.zeros_like(labels, dtype=bool)
    stack = [tuple(p) for p in seeds.pixels.tolist()]
    for p in stack:
        reach[p[0], p[1]] = True
    rows, cols = grid.shape
    while stack:
        r, c = stack.pop()
        steps = [
            ((r - 1, c), cd[r - 1, c] if r > 0 else False),
            ((r + 1, c), cd[r, c] if r < rows - 1 else False),
            ((r, (c - 1) % cols), cr[(r, (c - 1) % cols)]),
            ((r, (c + 1) % cols), cr[r, c]),
        ]
        for (nr, nc), ok in steps:
            if ok and not reach[nr, nc]:
                reach[nr, nc] = True
                stack.append((nr, nc))
    assert np.array_equal(labels > 0, reach)

    # symmetric matrices, counters consistent with totals, visit bounds
    assert np.array_equal(votes.v_plus, votes.v_plus.T)
    assert np.array_equal(votes.v_minus, votes.v_minus.T)
    assert stats.plus_votes == int(votes.v_plus.sum())
    assert stats.minus_votes == int(votes.v_minus.sum())
    n_active = int(img.occupancy().sum())
    assert stats.pops <= n_active
    assert stats.neighbor_evals <= 4 * stats.pops


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_deterministic(seed):
    rng = np.random.default_rng(seed)
    grid = random_grid(rng)
    img = image_from_range_grid(grid)
    occ = np.argwhere(img.occupancy())
    if occ.shape[0] < 3:
        return
    seeds = SeedList(occ[rng.choice(occ.shape[0], size=3, replace=False)])
    a = local_cluster(img, seeds, AngleCondition(10.0))
    b = local_cluster(img, seeds, AngleCondition(10.0))
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1].v_plus, b[1].v_plus)
    assert np.array_equal(a[1].v_minus, b[1].v_minus)
