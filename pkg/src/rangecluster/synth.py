"""Synthetic labeled scans for desk-scale testing.

Ray-casts a spinning multi-ring sensor at the origin against box and
cylinder primitives, producing an ordered scan with exact per-point
semantic/instance ground truth. Rays go through pixel centers of the
matching projection grid, so every returned point re-projects into its
own pixel (at most one point per pixel). Deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import PanopticFrame
from .range_image import PointCloud, ProjectionConfig

# Class ids used by the bundled scenes (SemanticKITTI raw-label numbering).
CLASS_CAR = 10
CLASS_PERSON = 30
CLASS_ROAD = 40
CLASS_BUILDING = 50


@dataclass
class Box:
    """Axis-sized box, optionally rotated around z by yaw (radians)."""

    center: tuple[float, float, float]
    size: tuple[float, float, float]
    class_id: int
    yaw: float = 0.0

    def __post_init__(self) -> None:
        if min(self.size) <= 0.0:
            raise ValueError(f"box size must be positive, got {self.size}")

    def intersect(self, dirs: np.ndarray) -> np.ndarray:
        """Smallest positive hit distance per unit ray from the origin (inf = miss)."""
        c = np.asarray(self.center)
        cos_y, sin_y = math.cos(-self.yaw), math.sin(-self.yaw)
        # Ray origin/direction in the box frame.
        ox, oy, oz = -c[0], -c[1], -c[2]
        o = np.array([ox * cos_y - oy * sin_y, ox * sin_y + oy * cos_y, oz])
        d = dirs.copy()
        d[:, 0] = dirs[:, 0] * cos_y - dirs[:, 1] * sin_y
        d[:, 1] = dirs[:, 0] * sin_y + dirs[:, 1] * cos_y
        half = np.asarray(self.size) / 2.0

        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / d
            t1 = (-half - o) * inv
            t2 = (half - o) * inv
        t_near = np.nanmax(np.minimum(t1, t2), axis=1)
        t_far = np.nanmin(np.maximum(t1, t2), axis=1)
        # Rays parallel to a slab: inside iff origin within that slab.
        parallel = d == 0.0
        outside = parallel & ((o < -half) | (o > half))
        hit = (t_near <= t_far) & (t_far > 0.0) & ~outside.any(axis=1)
        t = np.where(t_near > 0.0, t_near, t_far)  # origin inside: exit point
        return np.where(hit & (t > 0.0), t, np.inf)


@dataclass
class Cylinder:
    """Vertical capped cylinder (pedestrian/pole-like)."""

    center_xy: tuple[float, float]
    radius: float
    z_low: float
    z_high: float
    class_id: int

    def __post_init__(self) -> None:
        if self.radius <= 0.0 or self.z_high <= self.z_low:
            raise ValueError("cylinder needs positive radius and z_high > z_low")

    def intersect(self, dirs: np.ndarray) -> np.ndarray:
        cx, cy = self.center_xy
        dx, dy, dz = dirs[:, 0], dirs[:, 1], dirs[:, 2]
        a = dx * dx + dy * dy
        b = -2.0 * (cx * dx + cy * dy)
        c0 = cx * cx + cy * cy - self.radius**2
        disc = b * b - 4.0 * a * c0
        t_best = np.full(dirs.shape[0], np.inf)
        ok = (disc >= 0.0) & (a > 0.0)
        sq = np.sqrt(np.where(ok, disc, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            for sign in (-1.0, 1.0):
                t = np.where(ok, (-b + sign * sq) / (2.0 * a), np.inf)
                z = t * dz
                good = ok & (t > 0.0) & (z >= self.z_low) & (z <= self.z_high)
                t_best = np.where(good & (t < t_best), t, t_best)
            # End caps.
            for z_plane in (self.z_low, self.z_high):
                t = np.where(dz != 0.0, z_plane / dz, np.inf)
                px = t * dx - cx
                py = t * dy - cy
                good = (t > 0.0) & (px * px + py * py <= self.radius**2)
                t_best = np.where(good & (t < t_best), t, t_best)
        return t_best


Primitive = Box | Cylinder


@dataclass
class SensorModel:
    """Spinning sensor: rays through the pixel centers of this grid."""

    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    max_range: float = 120.0


@dataclass
class SceneSpec:
    primitives: list[Primitive]
    sensor: SensorModel = field(default_factory=SensorModel)
    noise_sigma: float = 0.0       # range jitter along the ray, meters
    stuff_classes: frozenset[int] = frozenset({CLASS_ROAD, CLASS_BUILDING})


def synth_scene(spec: SceneSpec, seed: int = 0) -> tuple[PointCloud, PanopticFrame]:
    """Ray-cast the scene; ground truth instances are 1-based per thing primitive."""
    cfg = spec.sensor.projection
    rows, cols = cfg.rows, cfg.cols

    elev = cfg.fov_up_rad - (np.arange(rows) + 0.5) / rows * cfg.fov_rad
    azim = math.pi * (1.0 - 2.0 * (np.arange(cols) + 0.5) / cols)
    ee, aa = np.meshgrid(elev, azim, indexing="ij")
    ce = np.cos(ee.ravel())
    dirs = np.stack([ce * np.cos(aa.ravel()), ce * np.sin(aa.ravel()), np.sin(ee.ravel())], axis=1)

    n_rays = dirs.shape[0]
    best_t = np.full(n_rays, np.inf)
    best_prim = np.full(n_rays, -1, dtype=np.int64)
    for i, prim in enumerate(spec.primitives):
        t = prim.intersect(dirs)
        closer = t < best_t
        best_t = np.where(closer, t, best_t)
        best_prim = np.where(closer, i, best_prim)

    hit = np.isfinite(best_t) & (best_t <= spec.sensor.max_range)
    rng = np.random.default_rng(seed)
    if spec.noise_sigma > 0.0:
        jitter = rng.normal(0.0, spec.noise_sigma, n_rays)
        best_t = np.maximum(best_t + jitter, 0.05)

    idx = np.flatnonzero(hit)
    xyz = dirs[idx] * best_t[idx, None]
    remission = rng.random(idx.size)

    instance_of_prim = np.zeros(len(spec.primitives), dtype=np.int64)
    next_id = 0
    for i, prim in enumerate(spec.primitives):
        if prim.class_id in spec.stuff_classes:
            instance_of_prim[i] = 0
        else:
            next_id += 1
            instance_of_prim[i] = next_id

    prim_idx = best_prim[idx]
    semantics = np.array([spec.primitives[i].class_id for i in prim_idx.tolist()], dtype=np.int64)
    instances = instance_of_prim[prim_idx]
    cloud = PointCloud(xyz=xyz, remission=remission)
    return cloud, PanopticFrame(semantics=semantics, instances=instances)


def random_scene(
    seed: int,
    n_objects: int = 12,
    projection: ProjectionConfig | None = None,
    noise_sigma: float = 0.0,
    with_ground: bool = True,
) -> SceneSpec:
    """Randomized street-like scene: ground plane plus scattered cars/people.

    Objects are placed on rings around the sensor with randomized pose and
    size; some cars get a nearby partner at a staggered depth, the
    configuration single-pass clustering tends to fuse.
    """
    rng = np.random.default_rng(seed)
    prims: list[Primitive] = []
    if with_ground:
        prims.append(Box(center=(0.0, 0.0, -1.9), size=(240.0, 240.0, 0.2), class_id=CLASS_ROAD))

    angle = rng.uniform(0.0, 2.0 * math.pi)
    for _ in range(n_objects):
        angle += rng.uniform(0.35, 0.9)
        dist = rng.uniform(6.0, 28.0)
        x, y = dist * math.cos(angle), dist * math.sin(angle)
        if rng.random() < 0.7:
            size = (
                float(rng.uniform(3.5, 4.6)),
                float(rng.uniform(1.6, 2.0)),
                float(rng.uniform(1.4, 1.7)),
            )
            yaw = float(rng.uniform(0.0, math.pi))
            prims.append(Box(center=(x, y, -1.0), size=size, class_id=CLASS_CAR, yaw=yaw))
            if rng.random() < 0.4:
                # Partner car slightly behind and beside: adjacent in the
                # image with a modest staggered depth gap.
                back = rng.uniform(0.6, 1.2)
                ux, uy = x / dist, y / dist
                px, py = -uy, ux
                side = rng.choice((-1.0, 1.0)) * rng.uniform(2.2, 2.8)
                prims.append(
                    Box(
                        center=(x + ux * back + px * side, y + uy * back + py * side, -1.0),
                        size=size,
                        class_id=CLASS_CAR,
                        yaw=yaw + float(rng.uniform(-0.2, 0.2)),
                    )
                )
        else:
            prims.append(
                Cylinder(
                    center_xy=(x, y),
                    radius=float(rng.uniform(0.25, 0.4)),
                    z_low=-1.8,
                    z_high=float(rng.uniform(-0.2, 0.1)),
                    class_id=CLASS_PERSON,
                )
            )

    sensor = SensorModel(projection=projection or ProjectionConfig())
    return SceneSpec(primitives=prims, sensor=sensor, noise_sigma=noise_sigma)
