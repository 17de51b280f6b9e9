"""Panoptic evaluation: PQ, RQ, SQ, the stuff-adjusted PQ variant, mIoU.

A segment is a maximal point set sharing (semantic class, instance id).
For class c,

    PQ_c = sum of IoU over matched pairs / (TP + FN/2 + FP/2)

where a prediction and a ground-truth segment match when their IoU
strictly exceeds 0.5 (which makes the matching unique). RQ is the same
denominator over TP alone, SQ the mean IoU over TP, and PQ_c = RQ_c * SQ_c
whenever TP > 0. Stuff classes carry instance 0, so they contribute at
most one segment per side. The adjusted variant (pq_dagger) replaces the
stuff-class score with the point-wise semantic IoU. Frame reports combine
by summing counts, so evaluation over a directory is a fold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# SemanticKITTI raw-label ids of the countable ("thing") classes.
KITTI_THING_CLASSES = frozenset({10, 11, 15, 18, 20, 30, 31, 32})
DEFAULT_IGNORE = frozenset({0})

_PAIR_SHIFT = 32  # instance ids fit 16 bits; 32 keeps pair keys collision-free


@dataclass
class PanopticFrame:
    """Per-point (semantic class, instance id) pairs."""

    semantics: np.ndarray  # (N,) int
    instances: np.ndarray  # (N,) int, 0 for stuff / no instance

    def __post_init__(self) -> None:
        self.semantics = np.asarray(self.semantics, dtype=np.int64)
        self.instances = np.asarray(self.instances, dtype=np.int64)
        if self.semantics.shape != self.instances.shape or self.semantics.ndim != 1:
            raise ValueError("semantics and instances must be equal-length 1D arrays")

    def __len__(self) -> int:
        return self.semantics.shape[0]


@dataclass
class ClassReport:
    class_id: int
    tp: int
    fp: int
    fn: int
    iou_sum: float
    pq: float
    rq: float
    sq: float
    pq_dagger: float
    iou: float  # point-wise semantic IoU


def match_segments(
    pred: PanopticFrame,
    gt: PanopticFrame,
    class_id: int,
    ignore_classes: frozenset[int] = DEFAULT_IGNORE,
) -> tuple[list[tuple[int, int, float]], set[int], set[int]]:
    """Greedy-free IoU matching of one class's segments.

    Returns (matched pairs with IoU, unmatched prediction ids, unmatched
    ground-truth ids). Points whose ground-truth class is in
    ignore_classes are cropped from both sides before matching.
    """
    if len(pred) != len(gt):
        raise ValueError(f"frame lengths differ: {len(pred)} vs {len(gt)}")
    keep = ~np.isin(gt.semantics, list(ignore_classes))
    p_sel = keep & (pred.semantics == class_id)
    g_sel = keep & (gt.semantics == class_id)

    p_ids, p_counts = np.unique(pred.instances[p_sel], return_counts=True)
    g_ids, g_counts = np.unique(gt.instances[g_sel], return_counts=True)
    p_size = dict(zip(p_ids.tolist(), p_counts.tolist()))
    g_size = dict(zip(g_ids.tolist(), g_counts.tolist()))

    both = p_sel & g_sel
    pair_key = (pred.instances[both] << _PAIR_SHIFT) | gt.instances[both]
    keys, inter = np.unique(pair_key, return_counts=True)

    tp_pairs: list[tuple[int, int, float]] = []
    matched_p: set[int] = set()
    matched_g: set[int] = set()
    for key, n_int in zip(keys.tolist(), inter.tolist()):
        pid = key >> _PAIR_SHIFT
        gid = key & ((1 << _PAIR_SHIFT) - 1)
        union = p_size[pid] + g_size[gid] - n_int
        iou = n_int / union
        if iou > 0.5:
            tp_pairs.append((pid, gid, iou))
            matched_p.add(pid)
            matched_g.add(gid)
    fp = set(p_size) - matched_p
    fn = set(g_size) - matched_g
    return tp_pairs, fp, fn


class PanopticAggregator:
    """Accumulates matching counts over frames; order of frames is irrelevant."""

    def __init__(
        self,
        classes: set[int] | frozenset[int],
        thing_classes: frozenset[int] = KITTI_THING_CLASSES,
        ignore_classes: frozenset[int] = DEFAULT_IGNORE,
    ):
        if not classes:
            raise ValueError("class set must be non-empty")
        self.classes = sorted(int(c) for c in classes)
        self.thing_classes = frozenset(thing_classes)
        self.ignore_classes = frozenset(ignore_classes)
        self.tp = {c: 0 for c in self.classes}
        self.fp = {c: 0 for c in self.classes}
        self.fn = {c: 0 for c in self.classes}
        self.iou_sum = {c: 0.0 for c in self.classes}
        self.sem_inter = {c: 0 for c in self.classes}
        self.sem_pred = {c: 0 for c in self.classes}
        self.sem_gt = {c: 0 for c in self.classes}

    def add_frame(self, pred: PanopticFrame, gt: PanopticFrame) -> None:
        if len(pred) != len(gt):
            raise ValueError(f"frame lengths differ: {len(pred)} vs {len(gt)}")
        keep = ~np.isin(gt.semantics, list(self.ignore_classes))
        for c in self.classes:
            pairs, fp, fn = match_segments(pred, gt, c, self.ignore_classes)
            self.tp[c] += len(pairs)
            self.fp[c] += len(fp)
            self.fn[c] += len(fn)
            self.iou_sum[c] += sum(iou for _, _, iou in pairs)
            p_c = keep & (pred.semantics == c)
            g_c = keep & (gt.semantics == c)
            self.sem_inter[c] += int(np.count_nonzero(p_c & g_c))
            self.sem_pred[c] += int(np.count_nonzero(p_c))
            self.sem_gt[c] += int(np.count_nonzero(g_c))

    def update(self, other: "PanopticAggregator") -> None:
        """Fold another aggregator in (associative and commutative)."""
        if other.classes != self.classes:
            raise ValueError("aggregators must cover the same class set")
        for c in self.classes:
            self.tp[c] += other.tp[c]
            self.fp[c] += other.fp[c]
            self.fn[c] += other.fn[c]
            self.iou_sum[c] += other.iou_sum[c]
            self.sem_inter[c] += other.sem_inter[c]
            self.sem_pred[c] += other.sem_pred[c]
            self.sem_gt[c] += other.sem_gt[c]

    def report(self) -> "PanopticReport":
        per_class: dict[int, ClassReport] = {}
        for c in self.classes:
            tp, fp, fn = self.tp[c], self.fp[c], self.fn[c]
            denom = tp + 0.5 * fn + 0.5 * fp
            pq = self.iou_sum[c] / denom if denom > 0 else 0.0
            rq = tp / denom if denom > 0 else 0.0
            sq = self.iou_sum[c] / tp if tp > 0 else 0.0
            union = self.sem_pred[c] + self.sem_gt[c] - self.sem_inter[c]
            iou = self.sem_inter[c] / union if union > 0 else 0.0
            dagger = pq if c in self.thing_classes else iou
            per_class[c] = ClassReport(c, tp, fp, fn, self.iou_sum[c], pq, rq, sq, dagger, iou)

        def seg_present(c: int) -> bool:
            return (self.tp[c] + self.fp[c] + self.fn[c]) > 0

        def sem_present(c: int) -> bool:
            return (self.sem_pred[c] + self.sem_gt[c]) > 0

        def avg(values: list[float]) -> float:
            return sum(values) / len(values) if values else 0.0

        things = [c for c in self.classes if c in self.thing_classes]
        stuff = [c for c in self.classes if c not in self.thing_classes]
        seg_classes = [c for c in self.classes if seg_present(c)]
        sem_classes = [c for c in self.classes if sem_present(c)]
        dagger_classes = [
            c
            for c in self.classes
            if (seg_present(c) if c in self.thing_classes else sem_present(c))
        ]

        return PanopticReport(
            per_class=per_class,
            pq=avg([per_class[c].pq for c in seg_classes]),
            rq=avg([per_class[c].rq for c in seg_classes]),
            sq=avg([per_class[c].sq for c in seg_classes]),
            pq_dagger=avg([per_class[c].pq_dagger for c in dagger_classes]),
            miou=avg([per_class[c].iou for c in sem_classes]),
            pq_things=avg([per_class[c].pq for c in things if seg_present(c)]),
            rq_things=avg([per_class[c].rq for c in things if seg_present(c)]),
            sq_things=avg([per_class[c].sq for c in things if seg_present(c)]),
            pq_stuff=avg([per_class[c].pq for c in stuff if seg_present(c)]),
            rq_stuff=avg([per_class[c].rq for c in stuff if seg_present(c)]),
            sq_stuff=avg([per_class[c].sq for c in stuff if seg_present(c)]),
        )


@dataclass
class PanopticReport:
    per_class: dict[int, ClassReport]
    pq: float
    rq: float
    sq: float
    pq_dagger: float
    miou: float
    pq_things: float
    rq_things: float
    sq_things: float
    pq_stuff: float
    rq_stuff: float
    sq_stuff: float

    def as_dict(self) -> dict:
        """Machine-readable key-value form (JSON-serializable)."""
        return {
            "PQ": self.pq,
            "PQ_dagger": self.pq_dagger,
            "RQ": self.rq,
            "SQ": self.sq,
            "mIoU": self.miou,
            "PQ_things": self.pq_things,
            "RQ_things": self.rq_things,
            "SQ_things": self.sq_things,
            "PQ_stuff": self.pq_stuff,
            "RQ_stuff": self.rq_stuff,
            "SQ_stuff": self.sq_stuff,
            "per_class": {
                str(c): {
                    "PQ": r.pq,
                    "RQ": r.rq,
                    "SQ": r.sq,
                    "PQ_dagger": r.pq_dagger,
                    "IoU": r.iou,
                    "TP": r.tp,
                    "FP": r.fp,
                    "FN": r.fn,
                }
                for c, r in self.per_class.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        """Line-oriented human-readable table."""
        lines = [
            f"{'class':>8} {'PQ':>8} {'RQ':>8} {'SQ':>8} {'IoU':>8} {'TP':>6} {'FP':>6} {'FN':>6}"
        ]
        for c, r in sorted(self.per_class.items()):
            lines.append(
                f"{c:>8} {r.pq:>8.4f} {r.rq:>8.4f} {r.sq:>8.4f} {r.iou:>8.4f}"
                f" {r.tp:>6} {r.fp:>6} {r.fn:>6}"
            )
        lines.append(
            f"{'all':>8} PQ={self.pq:.4f} PQ^={self.pq_dagger:.4f} RQ={self.rq:.4f}"
            f" SQ={self.sq:.4f} mIoU={self.miou:.4f}"
        )
        lines.append(
            f"{'things':>8} PQ={self.pq_things:.4f} RQ={self.rq_things:.4f} SQ={self.sq_things:.4f}"
        )
        lines.append(
            f"{'stuff':>8} PQ={self.pq_stuff:.4f} RQ={self.rq_stuff:.4f} SQ={self.sq_stuff:.4f}"
        )
        return "\n".join(lines)


def panoptic_quality(
    pred: PanopticFrame,
    gt: PanopticFrame,
    classes: set[int] | frozenset[int],
    thing_classes: frozenset[int] = KITTI_THING_CLASSES,
    ignore_classes: frozenset[int] = DEFAULT_IGNORE,
) -> PanopticReport:
    """Single-frame evaluation; see PanopticAggregator for multi-frame runs."""
    agg = PanopticAggregator(classes, thing_classes, ignore_classes)
    agg.add_frame(pred, gt)
    return agg.report()
