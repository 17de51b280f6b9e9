"""Real-time LiDAR instance clustering on spherical range images."""

from .baseline import ccl_binary, depth_cluster
from .connectivity import (
    AngleCondition,
    Condition,
    ConditionParams,
    EuclideanCondition,
    always_connected,
    angle_condition,
    compute_pair_conditions,
    neighborhood,
    pair_alpha,
    separation_angle,
)
from .kitti_io import FramePaths, collect_frames, read_labels, read_scan, write_labels, write_scan
from .local_cluster import (
    DivideStats,
    SeedList,
    VotingMatrices,
    VoxelGridConfig,
    local_cluster,
    select_seeds,
)
from .merge import MergeResult, merge_mapping, vote_and_merge
from .metrics import (
    KITTI_THING_CLASSES,
    ClassReport,
    PanopticAggregator,
    PanopticFrame,
    PanopticReport,
    match_segments,
    panoptic_quality,
)
from .pipeline import (
    FrameDiagnostics,
    PipelineConfig,
    cluster_frame,
    cluster_frame_baseline,
    warm_kernels,
)
from .postprocess import BevFootprint, bev_merge
from .range_image import (
    EMPTY_RANGE,
    PointCloud,
    ProjectionConfig,
    RangeImage,
    image_from_range_grid,
    project,
    unproject_labels,
)
from .synth import (
    Box,
    Cylinder,
    SceneSpec,
    SensorModel,
    random_scene,
    synth_scene,
)

__version__ = "0.1.0"

__all__ = [
    "AngleCondition",
    "BevFootprint",
    "Box",
    "ClassReport",
    "Condition",
    "ConditionParams",
    "Cylinder",
    "DivideStats",
    "EMPTY_RANGE",
    "EuclideanCondition",
    "FramePaths",
    "FrameDiagnostics",
    "KITTI_THING_CLASSES",
    "MergeResult",
    "PanopticAggregator",
    "PanopticFrame",
    "PanopticReport",
    "PipelineConfig",
    "PointCloud",
    "ProjectionConfig",
    "RangeImage",
    "SceneSpec",
    "SeedList",
    "SensorModel",
    "VotingMatrices",
    "VoxelGridConfig",
    "always_connected",
    "angle_condition",
    "bev_merge",
    "ccl_binary",
    "cluster_frame",
    "cluster_frame_baseline",
    "collect_frames",
    "compute_pair_conditions",
    "depth_cluster",
    "image_from_range_grid",
    "local_cluster",
    "match_segments",
    "merge_mapping",
    "neighborhood",
    "pair_alpha",
    "panoptic_quality",
    "project",
    "random_scene",
    "read_labels",
    "read_scan",
    "select_seeds",
    "separation_angle",
    "synth_scene",
    "unproject_labels",
    "vote_and_merge",
    "warm_kernels",
    "write_labels",
    "write_scan",
    "__version__",
]
