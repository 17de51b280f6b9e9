"""Reference clusterers: binary-image CCL and single-pass range-image CCL.

ccl_binary is the textbook 4-connected component labeling the range-image
methods generalize. depth_cluster is the single-pass clusterer this
library improves on: it commits to a connection on the first
condition-true pixel pair, so one spurious decision fuses two objects.
Both live in-repo so the acceptance suite can compare against them
hermetically.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .connectivity import Condition, ConditionParams, compute_pair_conditions
from .range_image import RangeImage


def ccl_binary(bits: np.ndarray) -> np.ndarray:
    """4-connected component labeling of a binary image.

    No column wrap (binary images are not panoramic). Labels are 1..k in
    row-major discovery order, 0 for background.
    """
    bits = np.asarray(bits)
    if bits.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {bits.shape}")
    rows, cols = bits.shape
    fg = bits.ravel() != 0
    labels = [0] * (rows * cols)
    fg_l = fg.astype(np.uint8).tobytes()
    next_label = 0
    for start in np.flatnonzero(fg).tolist():
        if labels[start]:
            continue
        next_label += 1
        labels[start] = next_label
        q = deque([start])
        while q:
            idx = q.popleft()
            r, c = divmod(idx, cols)
            if r > 0:
                n = idx - cols
                if fg_l[n] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
            if r < rows - 1:
                n = idx + cols
                if fg_l[n] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
            if c > 0:
                n = idx - 1
                if fg_l[n] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
            if c < cols - 1:
                n = idx + 1
                if fg_l[n] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
    return np.asarray(labels, dtype=np.int32).reshape(rows, cols)


def depth_cluster(
    img: RangeImage,
    condition: Condition,
    params: ConditionParams | None = None,
    active: np.ndarray | None = None,
    wrap: bool = True,
) -> np.ndarray:
    """Single-pass CCL on the range image under an injected pair predicate.

    Scans row-major; each unlabeled occupied pixel opens a new label and
    BFS-grows through condition-true 4-neighbors (columns wrap by
    default). With the constant-true predicate this equals ccl_binary on
    the occupancy mask (when wrap is off).
    """
    rows, cols = img.rows, img.cols
    wrap = bool(wrap) and cols > 2  # narrower grids have no distinct wrap neighbor
    occ = img.occupancy()
    if active is not None:
        active = np.asarray(active, dtype=bool)
        if active.shape != occ.shape:
            raise ValueError("active mask shape must match the image")
        occ = occ & active

    if params is None:
        params = ConditionParams.from_projection(img.config)
    cond_right, cond_down = compute_pair_conditions(img, condition, params, occ, wrap)

    # Condition bytes are already False across empty sides, so the claim
    # test needs no separate occupancy lookup.
    cr = cond_right.ravel().astype(np.uint8).tobytes()
    cd = cond_down.ravel().astype(np.uint8).tobytes()
    labels = [0] * (rows * cols)

    next_label = 0
    last_row_start = rows * cols - cols
    for start in np.flatnonzero(occ.ravel()).tolist():
        if labels[start]:
            continue
        next_label += 1
        labels[start] = next_label
        q = deque([start])
        while q:
            idx = q.popleft()
            c = idx % cols
            if idx >= cols:
                n = idx - cols
                if cd[n] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
            if idx < last_row_start:
                n = idx + cols
                if cd[idx] and not labels[n]:
                    labels[n] = next_label
                    q.append(n)
            n = idx - 1 if c > 0 else (idx + cols - 1 if wrap else -1)
            if n >= 0 and cr[n] and not labels[n]:
                labels[n] = next_label
                q.append(n)
            n = idx + 1 if c < cols - 1 else (idx - cols + 1 if wrap else -1)
            if n >= 0 and cr[idx] and not labels[n]:
                labels[n] = next_label
                q.append(n)
    return np.asarray(labels, dtype=np.int32).reshape(rows, cols)
