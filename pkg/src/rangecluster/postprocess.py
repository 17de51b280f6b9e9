"""Bird's-eye-view fix-up for dataset object definitions.

Some benchmarks count a driver and their car as one object, while
range-image clustering naturally separates them (their returns come from
different surfaces). This stage merges instances that share a semantic
class and overlap in the ground-plane footprint. It is dataset policy,
not geometry: keep it on for SemanticKITTI, switch it off elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .range_image import PointCloud


@dataclass
class BevFootprint:
    """Axis-aligned ground-plane rectangle of one instance."""

    instance: int
    semantic: int
    min_x: float
    max_x: float
    min_y: float
    max_y: float


def _footprints(
    instances: np.ndarray, semantics: np.ndarray, xy: np.ndarray
) -> list[BevFootprint]:
    pos = np.flatnonzero(instances > 0)
    if pos.size == 0:
        return []
    # One argsort groups points by instance; footprints come from slices.
    order = pos[np.argsort(instances[pos], kind="stable")]
    inst_sorted = instances[order]
    starts = np.flatnonzero(np.r_[True, inst_sorted[1:] != inst_sorted[:-1]])
    bounds = np.r_[starts, inst_sorted.size]
    out = []
    for k in range(starts.size):
        span = order[bounds[k] : bounds[k + 1]]
        pts = xy[span]
        classes = np.bincount(semantics[span].astype(np.int64))
        out.append(
            BevFootprint(
                instance=int(inst_sorted[bounds[k]]),
                semantic=int(classes.argmax()),  # majority, smallest id on ties
                min_x=float(pts[:, 0].min()),
                max_x=float(pts[:, 0].max()),
                min_y=float(pts[:, 1].min()),
                max_y=float(pts[:, 1].max()),
            )
        )
    return out


def _overlap(a: BevFootprint, b: BevFootprint) -> bool:
    # Closed intersection: touching edges count.
    return (
        a.min_x <= b.max_x
        and b.min_x <= a.max_x
        and a.min_y <= b.max_y
        and b.min_y <= a.max_y
    )


def bev_merge(
    instances: np.ndarray, semantics: np.ndarray, cloud: PointCloud
) -> np.ndarray:
    """Merge same-class instances whose ground-plane rectangles intersect.

    Each merged group takes its smallest member label. Iterates to a fixed
    point so the operation is idempotent (a merged group's union rectangle
    can newly overlap a third instance). Instance 0 (no instance) is left
    untouched; semantics are never altered.
    """
    instances = np.asarray(instances)
    semantics = np.asarray(semantics)
    if not (len(instances) == len(semantics) == len(cloud)):
        raise ValueError("instances, semantics and cloud must share a length")
    out = instances.copy()
    xy = cloud.xyz[:, :2]

    while True:
        feet = _footprints(out, semantics, xy)
        parent = {f.instance: f.instance for f in feet}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        merged_any = False
        for i in range(len(feet)):
            for j in range(i + 1, len(feet)):
                a, b = feet[i], feet[j]
                if a.semantic != b.semantic or not _overlap(a, b):
                    continue
                ra, rb = find(a.instance), find(b.instance)
                if ra != rb:
                    lo, hi = min(ra, rb), max(ra, rb)
                    parent[hi] = lo
                    merged_any = True
        if not merged_any:
            return out
        ids = np.array([f.instance for f in feet], dtype=np.int64)
        roots = np.array([find(f.instance) for f in feet], dtype=np.int64)
        lut = np.arange(int(out.max()) + 1, dtype=np.int64)
        lut[ids] = roots
        out = lut[out].astype(out.dtype, copy=False)
