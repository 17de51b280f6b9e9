"""The divide step: voxel-seeded round-robin expansion on the range image.

One seed per occupied voxel starts one local label. All labels grow
breadth-first in lockstep (one pop per live queue per round), claiming
condition-true unlabeled neighbors. Whenever growth runs into another
label, the encounter is tallied as boundary evidence: condition-true
cross-label contacts vote into v_plus, condition-false ones into v_minus.
Condition-false contacts with still-unlabeled pixels are parked on an
undecided list and converted to v_minus votes after all queues drain, if
the neighbor ended up with a different label. No new label is ever
created; pixels unreachable from every seed stay 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import expand_kernel
from .connectivity import Condition, ConditionParams, compute_pair_conditions
from .range_image import PointCloud, RangeImage


@dataclass
class VoxelGridConfig:
    """Cubic voxel grid anchored at the world origin."""

    edge: float = 0.5  # meters

    def __post_init__(self) -> None:
        if self.edge <= 0.0:
            raise ValueError(f"voxel edge must be positive, got {self.edge}")


@dataclass
class SeedList:
    """One pixel per non-empty voxel; order fixes label numbering."""

    pixels: np.ndarray  # (m, 2) int32 rows/cols

    def __post_init__(self) -> None:
        self.pixels = np.asarray(self.pixels, dtype=np.int32).reshape(-1, 2)

    def __len__(self) -> int:
        return self.pixels.shape[0]


@dataclass
class VotingMatrices:
    """Boundary evidence between local labels (0-indexed by label - 1).

    Both matrices are symmetric after the divide step finalizes; the
    diagonal is never written or read. int32 is deep enough: the divide
    step writes at most 8 increments per image pixel in total, and merge
    folds accumulate at most that grand total into any one cell.
    """

    v_plus: np.ndarray   # (m, m) int32
    v_minus: np.ndarray  # (m, m) int32

    def __post_init__(self) -> None:
        self.v_plus = self._coerce(self.v_plus)
        self.v_minus = self._coerce(self.v_minus)
        if self.v_plus.shape != self.v_minus.shape:
            raise ValueError("vote matrices must share a shape")
        if self.v_plus.ndim != 2 or self.v_plus.shape[0] != self.v_plus.shape[1]:
            raise ValueError(f"vote matrices must be square, got {self.v_plus.shape}")

    @staticmethod
    def _coerce(arr) -> np.ndarray:
        arr = np.asarray(arr)
        if arr.dtype != np.int32:
            if arr.size and (arr.max() > np.iinfo(np.int32).max or arr.min() < 0):
                raise ValueError("vote counts must be non-negative and fit int32")
            arr = arr.astype(np.int32)
        return arr

    @property
    def m(self) -> int:
        return self.v_plus.shape[0]

    @classmethod
    def zeros(cls, m: int) -> "VotingMatrices":
        return cls(np.zeros((m, m), np.int32), np.zeros((m, m), np.int32))


@dataclass
class DivideStats:
    """Operation counters for the divide step (machine-independent cost)."""

    pops: int = 0
    neighbor_evals: int = 0
    claims: int = 0
    plus_votes: int = 0
    minus_votes: int = 0
    undecided_pairs: int = 0


def select_seeds(
    cloud: PointCloud,
    img: RangeImage,
    mask: np.ndarray,
    cfg: VoxelGridConfig,
) -> SeedList:
    """Pick one pixel per non-empty voxel of masked-in, pixel-winning points.

    Voxel key is floor(coord / edge) per axis. The representative of a
    voxel is its smallest masked-in point index; seeds come back sorted by
    that index, which makes label numbering deterministic.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape[0] != len(cloud):
        raise ValueError(f"mask length {mask.shape[0]} != point count {len(cloud)}")
    if cfg.edge <= 0.0:
        raise ValueError(f"voxel edge must be positive, got {cfg.edge}")

    winners = img.point_index[img.point_index >= 0]
    winners = winners[mask[winners]]
    if winners.size == 0:
        return SeedList(np.zeros((0, 2), np.int32))

    keys = np.floor(cloud.xyz[winners] / cfg.edge).astype(np.int64)
    # pack the 3 key columns into one int64 when spans allow (fast path)
    lo = keys.min(axis=0)
    span = keys.max(axis=0) - lo + 1
    if int(span[0]) * int(span[1]) * int(span[2]) < 2**62:
        shifted = keys - lo
        packed = (shifted[:, 0] * span[1] + shifted[:, 1]) * span[2] + shifted[:, 2]
        _, inverse = np.unique(packed, return_inverse=True)
    else:
        _, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    reps = np.full(inverse.max() + 1, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(reps, inverse, winners.astype(np.int64))
    reps = np.sort(reps)
    return SeedList(np.stack([img.proj_rows[reps], img.proj_cols[reps]], axis=1))


def local_cluster(
    img: RangeImage,
    seeds: SeedList,
    condition: Condition,
    params: ConditionParams | None = None,
    active: np.ndarray | None = None,
    wrap: bool = True,
) -> tuple[np.ndarray, VotingMatrices, DivideStats]:
    """Grow all seed labels in round-robin and collect boundary votes.

    Returns the label image (0 = unlabeled, 1..m = seed labels), the
    finalized symmetric vote matrices, and operation counters. Pixels
    outside `active` (default: all occupied pixels) are treated as empty.
    Deterministic: fixed seed order, fixed round-robin order, fixed
    up/down/left/right scan order.
    """
    rows, cols = img.rows, img.cols
    wrap = bool(wrap) and cols > 2  # narrower grids have no distinct wrap neighbor
    occ = img.occupancy()
    if active is not None:
        active = np.asarray(active, dtype=bool)
        if active.shape != occ.shape:
            raise ValueError("active mask shape must match the image")
        occ = occ & active

    m = len(seeds)
    labels = np.zeros((rows, cols), dtype=np.int32)
    votes = VotingMatrices.zeros(m)
    stats = DivideStats()
    if m == 0:
        return labels, votes, stats

    srow = seeds.pixels[:, 0]
    scol = seeds.pixels[:, 1]
    if np.any((srow < 0) | (srow >= rows) | (scol < 0) | (scol >= cols)):
        raise ValueError("seed pixel out of bounds")
    if not np.all(occ[srow, scol]):
        raise ValueError("every seed must sit on an occupied, masked-in pixel")
    flat_seeds = srow.astype(np.int64) * cols + scol
    if np.unique(flat_seeds).size != m:
        raise ValueError("seed pixels must be pairwise distinct")

    if params is None:
        params = ConditionParams.from_projection(img.config)
    if params.vertical_steps.shape[0] != max(rows - 1, 0):
        raise ValueError("vertical step table must have rows - 1 entries")

    cond_right, cond_down = compute_pair_conditions(img, condition, params, occ, wrap)

    # Each adjacency collapses to one edge-state value: 0 = empty side
    # (skip), 1 = connected, 2 = occupied but not connected. The jitted
    # kernel then walks the queues without touching the predicate.
    both_right = occ & np.roll(occ, -1, axis=1)
    if not wrap:
        both_right[:, cols - 1] = False
    both_down = np.zeros((rows, cols), dtype=bool)
    if rows > 1:
        both_down[:-1] = occ[:-1] & occ[1:]
    er = np.where(both_right, np.where(cond_right, 1, 2), 0).astype(np.uint8).ravel()
    ed = np.where(both_down, np.where(cond_down, 1, 2), 0).astype(np.uint8).ravel()

    lab = np.zeros(rows * cols, dtype=np.int32)
    # one undecided record at most per not-connected adjacency
    cap = int((er == 2).sum()) + int((ed == 2).sum()) + 1
    und = np.empty((cap, 2), dtype=np.int64)
    n_und, n_plus, n_minus = expand_kernel(
        ed, er, lab, flat_seeds, rows, cols, wrap, votes.v_plus, votes.v_minus, und
    )
    labels = lab.reshape(rows, cols)

    # Every labeled pixel was enqueued exactly once (claims require label
    # 0, labels never change), so the loop counters follow from the label
    # image: pops = labeled pixels, evaluations = their in-bounds
    # neighbor slots.
    labeled = labels > 0
    pops = int(labeled.sum())
    nevals = 4 * pops - int(labeled[0].sum())
    if rows > 1:
        nevals -= int(labeled[rows - 1].sum())
    else:
        nevals -= pops  # single row: no up and no down neighbor
    if not wrap:
        nevals -= int(labeled[:, 0].sum()) + int(labeled[:, cols - 1].sum())
    stats.pops = pops
    stats.neighbor_evals = nevals
    stats.claims = pops - m
    stats.plus_votes = int(n_plus)
    stats.minus_votes = int(n_minus)
    stats.undecided_pairs = int(n_und)
    return labels, votes, stats
