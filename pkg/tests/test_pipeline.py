import numpy as np
import pytest

from oracles import canonical_partition
from rangecluster import (
    EuclideanCondition,
    PipelineConfig,
    PointCloud,
    cluster_frame,
    cluster_frame_baseline,
    random_scene,
    synth_scene,
)


def test_all_stuff_frame_gets_zero_instances():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-20, 20, (500, 3))
    cloud = PointCloud(pts, np.zeros(500))
    sem = np.full(500, 40)  # road everywhere
    inst, diag = cluster_frame(cloud, sem)
    assert (inst == 0).all()
    assert diag.m_seeds == 0 and diag.n_instances == 0


def test_two_box_scene_matches_ground_truth(two_box_scene):
    cloud, gt = two_box_scene
    inst, diag = cluster_frame(cloud, gt.semantics)
    assert inst.max() == 2
    thing = gt.instances > 0
    assert np.array_equal(
        canonical_partition(inst[thing]), canonical_partition(gt.instances[thing])
    )
    # stuff points keep instance 0
    assert (inst[~thing] == 0).all()


def test_close_cars_angle_splits_euclidean_fuses(close_cars_scene):
    cloud, gt = close_cars_scene
    inst_angle, _ = cluster_frame(cloud, gt.semantics)
    inst_euclid, _ = cluster_frame(
        cloud, gt.semantics, condition=EuclideanCondition(1.0)
    )
    assert inst_angle.max() == 2
    assert inst_euclid.max() == 1


def test_semantics_never_modified(two_box_scene):
    cloud, gt = two_box_scene
    sem = gt.semantics.copy()
    cluster_frame(cloud, sem)
    assert np.array_equal(sem, gt.semantics)


def test_instance_ids_dense(two_box_scene):
    cloud, gt = two_box_scene
    inst, _ = cluster_frame(cloud, gt.semantics)
    ids = np.unique(inst[inst > 0])
    assert ids.tolist() == list(range(1, len(ids) + 1))


def test_monotone_seed_count_under_halving():
    cloud, gt = synth_scene(random_scene(seed=2, n_objects=6), seed=2)
    ms = []
    for l in (2.0, 1.0, 0.5, 0.25):
        _, diag = cluster_frame(cloud, gt.semantics, PipelineConfig(voxel_size=l))
        ms.append(diag.m_seeds)
    assert ms == sorted(ms)
    assert ms[0] < ms[-1]


def test_semantics_length_checked():
    cloud = PointCloud(np.array([[5.0, 0.0, 0.0]]), np.zeros(1))
    with pytest.raises(ValueError):
        cluster_frame(cloud, np.array([10, 10]))


def test_baseline_matches_on_clean_scene(two_box_scene):
    cloud, gt = two_box_scene
    a, _ = cluster_frame(cloud, gt.semantics)
    b, _ = cluster_frame_baseline(cloud, gt.semantics)
    assert np.array_equal(canonical_partition(a), canonical_partition(b))


def test_diagnostics_populated(two_box_scene):
    cloud, gt = two_box_scene
    _, diag = cluster_frame(cloud, gt.semantics)
    assert diag.n_points == len(cloud)
    assert diag.m_seeds > 0
    assert diag.divide is not None and diag.divide.pops > 0
    assert diag.merge is not None
    assert set(diag.timings_ms) >= {"project", "seed", "divide", "merge", "unproject"}
    assert diag.total_ms > 0


def test_postprocess_flag_respected(two_box_scene):
    cloud, gt = two_box_scene
    cfg = PipelineConfig(postprocess=False)
    _, diag = cluster_frame(cloud, gt.semantics, cfg)
    assert "postprocess" not in diag.timings_ms


def test_invalid_config_rejected():
    with pytest.raises(ValueError):
        PipelineConfig(voxel_size=0.0)
    with pytest.raises(ValueError):
        PipelineConfig(theta_deg=90.0)


def test_custom_thing_classes(two_box_scene):
    cloud, gt = two_box_scene
    # declare "car" a stuff class: nothing is left to cluster
    cfg = PipelineConfig(thing_classes=frozenset({30}))
    inst, diag = cluster_frame(cloud, gt.semantics, cfg)
    assert (inst == 0).all() and diag.m_seeds == 0
