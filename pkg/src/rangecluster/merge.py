"""The merge step: fuse local labels whose positive boundary votes win.

Local labels are nodes; a pair merges when v_plus[target, query] strictly
exceeds v_minus[target, query]. Merging is transitive: accepted labels
join a queue, and the accepted label's vote rows absorb the target's rows
so downstream decisions see the accumulated evidence of the whole cluster
so far. Scan order is ascending local label; final labels are numbered by
cluster discovery order starting at 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import merge_kernel
from .local_cluster import VotingMatrices


@dataclass
class MergeResult:
    """Mapping from local labels (0-based) to final instance labels (1-based)."""

    merged_label_list: np.ndarray  # (m,) int32, values in 1..n_instances
    n_instances: int
    vote_evals: int = 0
    row_folds: int = 0

    def __post_init__(self) -> None:
        self.merged_label_list = np.asarray(self.merged_label_list, dtype=np.int32)


def merge_mapping(votes: VotingMatrices) -> MergeResult:
    """Run the voting walk over working copies of the matrices.

    The caller's matrices are never mutated. A query already accepted into
    the current cluster is not re-accepted (a second row fold would only
    duplicate evidence and would break the fold <= m cost bound).
    """
    m = votes.m
    if m == 0:
        return MergeResult(np.zeros(0, np.int32), 0)

    vp = votes.v_plus.copy()
    vm = votes.v_minus.copy()
    mapping = np.zeros(m, dtype=np.int32)
    n_instances, vote_evals, row_folds = merge_kernel(vp, vm, mapping)
    return MergeResult(mapping, int(n_instances), int(vote_evals), int(row_folds))


def vote_and_merge(
    votes: VotingMatrices, img: np.ndarray
) -> tuple[np.ndarray, MergeResult]:
    """Merge labels and rewrite the label image through the mapping.

    Unlabeled (0) pixels stay 0; every other pixel value v becomes
    merged_label_list[v - 1].
    """
    img = np.asarray(img)
    m = votes.m
    if img.size and int(img.max()) > m:
        raise ValueError(f"label image holds label {int(img.max())} > m={m}")
    if img.size and int(img.min()) < 0:
        raise ValueError("label image holds a negative label")
    result = merge_mapping(votes)
    if m == 0:
        return img.copy(), result
    out = np.where(img > 0, result.merged_label_list[np.maximum(img, 1) - 1], 0)
    return out.astype(img.dtype, copy=False), result
