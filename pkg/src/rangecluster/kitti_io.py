"""SemanticKITTI file formats.

Scans are packed little-endian float32 quadruples (x, y, z, remission).
Labels are packed little-endian uint32 words: semantic class in the low
16 bits, instance id in the high 16 bits. Output directories mirror the
dataset's sequence/frame stem numbering; writes are atomic (tmp +
rename) so frame-parallel workers never expose partial files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .range_image import PointCloud


@dataclass
class FramePaths:
    """One frame's files, paired by stem across directories."""

    scan: Path
    labels: Path | None = None
    output: Path | None = None

    def __post_init__(self) -> None:
        self.scan = Path(self.scan)
        if not self.scan.exists():
            raise FileNotFoundError(f"scan file missing: {self.scan}")


def collect_frames(
    scan_dir: str | Path,
    label_dir: str | Path | None = None,
    out_dir: str | Path | None = None,
) -> list[FramePaths]:
    """Pair every scan in scan_dir with its label/output counterparts.

    Label paths are included even when the file is missing so callers can
    report per-frame errors; scan paths are verified to exist.
    """
    frames = []
    for stem in frame_stems(scan_dir, ".bin"):
        frames.append(
            FramePaths(
                scan=Path(scan_dir) / f"{stem}.bin",
                labels=Path(label_dir) / f"{stem}.label" if label_dir else None,
                output=Path(out_dir) / f"{stem}.label" if out_dir else None,
            )
        )
    return frames


def read_scan(path: str | Path) -> PointCloud:
    """Read a .bin scan. File size must be a multiple of 16 bytes."""
    path = Path(path)
    size = path.stat().st_size
    if size % 16 != 0:
        raise ValueError(f"{path}: size {size} is not a multiple of 16 bytes")
    arr = np.fromfile(path, dtype="<f4").reshape(-1, 4)
    return PointCloud.from_array(arr.astype(np.float64))


def write_scan(cloud: PointCloud, path: str | Path) -> None:
    """Inverse of read_scan (float32 precision)."""
    arr = np.concatenate(
        [cloud.xyz.astype("<f4"), cloud.remission.astype("<f4")[:, None]], axis=1
    )
    _atomic_tofile(arr.astype("<f4"), Path(path))


def read_labels(path: str | Path, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Read a .label file as (semantics, instances); must hold n_points words."""
    path = Path(path)
    words = np.fromfile(path, dtype="<u4")
    if words.shape[0] != n_points:
        raise ValueError(f"{path}: holds {words.shape[0]} labels, expected {n_points}")
    semantics = (words & 0xFFFF).astype(np.int32)
    instances = (words >> 16).astype(np.int32)
    return semantics, instances


def write_labels(
    semantics: np.ndarray, instances: np.ndarray, path: str | Path
) -> None:
    """Write a .label file; read_labels(write_labels(x)) == x bit-exactly."""
    semantics = np.asarray(semantics)
    instances = np.asarray(instances)
    if semantics.shape != instances.shape or semantics.ndim != 1:
        raise ValueError("semantics and instances must be equal-length 1D arrays")
    if semantics.size and (semantics.min() < 0 or semantics.max() >= 1 << 16):
        raise ValueError("semantic ids must fit in 16 bits")
    if instances.size and (instances.min() < 0 or instances.max() >= 1 << 16):
        raise ValueError("instance ids must fit in 16 bits")
    words = (instances.astype("<u4") << 16) | semantics.astype("<u4")
    _atomic_tofile(words, Path(path))


def _atomic_tofile(arr: np.ndarray, path: Path) -> None:
    tmp = path.with_name(path.name + ".tmp")
    arr.tofile(tmp)
    os.replace(tmp, path)


def frame_stems(directory: str | Path, suffix: str) -> list[str]:
    """Sorted file stems with the given suffix in a directory."""
    return sorted(p.stem for p in Path(directory).glob(f"*{suffix}"))
