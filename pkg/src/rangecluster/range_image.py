"""Spherical range-image projection with stable point-index correspondence.

A LiDAR frame is an ordered list of returns; projecting it onto a
rows x cols spherical grid gives the clustering substrate. Every grid
cell remembers which point won it, and every point remembers which cell
it landed in, so per-pixel labels can be pushed back onto the full cloud
after clustering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Empty pixels hold a negative range so a legitimate near-zero return can
# never be mistaken for emptiness.
EMPTY_RANGE = -1.0


@dataclass(frozen=True)
class ProjectionConfig:
    """Geometry of the spherical grid.

    Rows span the vertical field of view linearly (row 0 at fov_up_deg),
    columns span the full 360 degrees of azimuth with the image center at
    azimuth zero (straight ahead, +x).
    """

    rows: int = 64
    cols: int = 2048
    fov_up_deg: float = 3.0
    fov_down_deg: float = -25.0

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        if not self.fov_up_deg > self.fov_down_deg:
            raise ValueError("vertical FOV must satisfy fov_up_deg > fov_down_deg")

    @property
    def fov_up_rad(self) -> float:
        return math.radians(self.fov_up_deg)

    @property
    def fov_down_rad(self) -> float:
        return math.radians(self.fov_down_deg)

    @property
    def fov_rad(self) -> float:
        return self.fov_up_rad - self.fov_down_rad


@dataclass
class PointCloud:
    """One LiDAR frame: N points with remission, index-stable for its lifetime."""

    xyz: np.ndarray        # (N, 3) float64, all finite
    remission: np.ndarray  # (N,) float64

    def __post_init__(self) -> None:
        self.xyz = np.asarray(self.xyz, dtype=np.float64)
        self.remission = np.asarray(self.remission, dtype=np.float64)
        if self.xyz.ndim != 2 or self.xyz.shape[1] != 3:
            raise ValueError(f"xyz must be (N, 3), got {self.xyz.shape}")
        if self.remission.shape != (self.xyz.shape[0],):
            raise ValueError("remission length must match point count")
        if not np.all(np.isfinite(self.xyz)):
            raise ValueError("point coordinates must be finite (no NaN/Inf)")

    def __len__(self) -> int:
        return self.xyz.shape[0]

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "PointCloud":
        """Build from an (N, 4) array of x, y, z, remission."""
        arr = np.asarray(arr)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ValueError(f"expected (N, 4) array, got {arr.shape}")
        return cls(xyz=arr[:, :3], remission=arr[:, 3])

    @classmethod
    def empty(cls) -> "PointCloud":
        return cls(xyz=np.zeros((0, 3)), remission=np.zeros(0))


@dataclass
class RangeImage:
    """Projected frame: per-pixel range + winning point index, per-point pixel.

    range[r, c] > 0 exactly where point_index[r, c] >= 0. proj_rows/proj_cols
    give the pixel every source point mapped to (-1 for dropped points), even
    for points that lost the nearest-wins race.
    """

    config: ProjectionConfig
    range: np.ndarray        # (rows, cols) float64, EMPTY_RANGE where empty
    point_index: np.ndarray  # (rows, cols) int32, -1 where empty
    proj_rows: np.ndarray    # (N,) int32
    proj_cols: np.ndarray    # (N,) int32
    cloud: PointCloud = field(repr=False)

    @property
    def rows(self) -> int:
        return self.config.rows

    @property
    def cols(self) -> int:
        return self.config.cols

    def occupancy(self) -> np.ndarray:
        """Boolean grid of pixels holding a point."""
        return self.point_index >= 0


def project(cloud: PointCloud, cfg: ProjectionConfig) -> RangeImage:
    """Project a cloud onto the spherical grid; nearest point wins a pixel.

    Points at the exact sensor origin are dropped (no defined direction).
    Rows clamp to the vertical FOV edges, columns wrap (azimuth is periodic).
    Ties on range break toward the smaller point index, so output is
    bit-reproducible for identical input.
    """
    n = len(cloud)
    rows, cols = cfg.rows, cfg.cols
    rng_grid = np.full((rows, cols), EMPTY_RANGE, dtype=np.float64)
    idx_grid = np.full((rows, cols), -1, dtype=np.int32)
    proj_r = np.full(n, -1, dtype=np.int32)
    proj_c = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return RangeImage(cfg, rng_grid, idx_grid, proj_r, proj_c, cloud)

    x, y, z = cloud.xyz[:, 0], cloud.xyz[:, 1], cloud.xyz[:, 2]
    dist = np.sqrt(x * x + y * y + z * z)
    keep = np.flatnonzero(dist > 0.0)
    if keep.size == 0:
        return RangeImage(cfg, rng_grid, idx_grid, proj_r, proj_c, cloud)

    d = dist[keep]
    yaw = np.arctan2(y[keep], x[keep])
    pitch = np.arcsin(np.clip(z[keep] / d, -1.0, 1.0))

    col = np.floor(0.5 * (1.0 - yaw / math.pi) * cols).astype(np.int64) % cols
    row_f = (cfg.fov_up_rad - pitch) / cfg.fov_rad * rows
    row = np.clip(np.floor(row_f), 0, rows - 1).astype(np.int64)

    proj_r[keep] = row
    proj_c[keep] = col

    # Nearest-wins per pixel, ties to the smallest point index: sort by
    # (pixel, range, index) and keep the first entry of each pixel run.
    pix = row * cols + col
    order = np.lexsort((keep, d, pix))
    pix_sorted = pix[order]
    first = np.ones(pix_sorted.size, dtype=bool)
    first[1:] = pix_sorted[1:] != pix_sorted[:-1]
    win = order[first]

    rng_grid.ravel()[pix[win]] = d[win]
    idx_grid.ravel()[pix[win]] = keep[win]
    return RangeImage(cfg, rng_grid, idx_grid, proj_r, proj_c, cloud)


def image_from_range_grid(grid: np.ndarray, cfg: ProjectionConfig | None = None) -> RangeImage:
    """Build a RangeImage straight from a range grid (organized-scan input).

    Cells with value <= 0 are empty. Points are synthesized on the pixel
    centers' ray directions at the given ranges, indexed row-major over
    occupied cells, so the geometry is self-consistent with `project`.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2:
        raise ValueError(f"expected a 2D grid, got shape {grid.shape}")
    rows, cols = grid.shape
    if cfg is None:
        cfg = ProjectionConfig(rows=rows, cols=cols)
    elif (cfg.rows, cfg.cols) != (rows, cols):
        raise ValueError("config dimensions must match the grid")

    occ_r, occ_c = np.nonzero(grid > 0.0)
    d = grid[occ_r, occ_c]
    elev = cfg.fov_up_rad - (occ_r + 0.5) / rows * cfg.fov_rad
    azim = math.pi * (1.0 - 2.0 * (occ_c + 0.5) / cols)
    ce = np.cos(elev)
    xyz = np.stack([d * ce * np.cos(azim), d * ce * np.sin(azim), d * np.sin(elev)], axis=1)
    cloud = PointCloud(xyz=xyz, remission=np.zeros(d.size))

    rng_grid = np.full((rows, cols), EMPTY_RANGE, dtype=np.float64)
    idx_grid = np.full((rows, cols), -1, dtype=np.int32)
    rng_grid[occ_r, occ_c] = d
    idx_grid[occ_r, occ_c] = np.arange(d.size, dtype=np.int32)
    return RangeImage(cfg, rng_grid, idx_grid,
                      occ_r.astype(np.int32), occ_c.astype(np.int32), cloud)


def unproject_labels(
    img: RangeImage,
    labels: np.ndarray,
    n_points: int,
    semantics: np.ndarray | None = None,
) -> np.ndarray:
    """Push per-pixel labels back onto the full cloud.

    A point that won its pixel takes the pixel's label directly. A point
    that lost the nearest-wins race inherits the pixel's label only when
    its semantic class matches the winner's (pass semantics to enable the
    check; without it occluded points inherit unconditionally). Dropped
    points get 0.
    """
    labels = np.asarray(labels)
    if labels.shape != (img.rows, img.cols):
        raise ValueError(
            f"label grid {labels.shape} does not match image {(img.rows, img.cols)}"
        )
    if n_points != img.proj_rows.shape[0]:
        raise ValueError(
            f"n_points={n_points} does not match projection record ({img.proj_rows.shape[0]})"
        )
    out = np.zeros(n_points, dtype=labels.dtype)
    has_pix = np.flatnonzero(img.proj_rows >= 0)
    if has_pix.size == 0:
        return out
    r = img.proj_rows[has_pix]
    c = img.proj_cols[has_pix]
    pix_label = labels[r, c]
    if semantics is None:
        out[has_pix] = pix_label
        return out
    semantics = np.asarray(semantics)
    if semantics.shape[0] != n_points:
        raise ValueError("semantics length must equal n_points")
    winner = img.point_index[r, c]
    same_class = semantics[has_pix] == semantics[winner]
    own_pixel = winner == has_pix
    out[has_pix] = np.where(own_pixel | same_class, pix_label, 0)
    return out
