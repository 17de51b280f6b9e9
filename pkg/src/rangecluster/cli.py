"""Command-line front end: cluster, eval, sweep.

cluster  scans + semantic labels -> instance label files (leaderboard format)
eval     prediction labels vs. ground-truth labels -> PQ-family report
sweep    runtime/accuracy trade-off across voxel sizes -> plot-ready table
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .kitti_io import FramePaths, collect_frames, frame_stems, read_labels, read_scan, write_labels
from .metrics import KITTI_THING_CLASSES, PanopticAggregator, PanopticFrame
from .pipeline import PipelineConfig, cluster_frame, cluster_frame_baseline, warm_kernels
from .range_image import ProjectionConfig


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        voxel_size=getattr(args, "voxel_size", 0.5),
        theta_deg=args.theta,
        projection=ProjectionConfig(
            rows=args.rows,
            cols=args.cols,
            fov_up_deg=args.fov_up,
            fov_down_deg=args.fov_down,
        ),
        thing_classes=frozenset(args.things),
        postprocess=not args.no_postprocess,
        wrap=not args.no_wrap,
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, default=10.0, help="angle threshold, degrees")
    p.add_argument("--rows", type=int, default=64)
    p.add_argument("--cols", type=int, default=2048)
    p.add_argument("--fov-up", type=float, default=3.0)
    p.add_argument("--fov-down", type=float, default=-25.0)
    p.add_argument("--no-postprocess", action="store_true", help="skip the BEV merge stage")
    p.add_argument("--no-wrap", action="store_true", help="disable azimuth wraparound")
    p.add_argument(
        "--things",
        type=lambda s: [int(v) for v in s.split(",")],
        default=sorted(KITTI_THING_CLASSES),
        help="comma-separated thing class ids",
    )


def cmd_cluster(args: argparse.Namespace) -> int:
    scan_dir, sem_dir, out_dir = Path(args.scans), Path(args.semantics), Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = _pipeline_config(args)
    run = cluster_frame_baseline if args.baseline else cluster_frame

    def one(frame: FramePaths) -> tuple[str, float, str | None]:
        stem = frame.scan.stem
        if not frame.labels.exists():
            return stem, 0.0, f"missing semantic file {frame.labels}"
        try:
            cloud = read_scan(frame.scan)
            semantics, _ = read_labels(frame.labels, len(cloud))
            t0 = time.perf_counter()
            instances, _diag = run(cloud, semantics, cfg)
            dt = (time.perf_counter() - t0) * 1e3
            write_labels(semantics, instances, frame.output)
            return stem, dt, None
        except (ValueError, OSError) as exc:
            return stem, 0.0, str(exc)

    frames = collect_frames(scan_dir, sem_dir, out_dir)
    if frames:
        warm_kernels()  # keep jit compilation out of the per-frame timings
    results: list[tuple[str, float, str | None]]
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(one, frames))
    else:
        results = [one(f) for f in frames]

    failed = 0
    times = []
    for stem, dt, err in results:
        if err is not None:
            failed += 1
            print(f"{stem}: ERROR {err}", file=sys.stderr)
        else:
            times.append(dt)
            print(f"{stem}: {dt:.1f} ms")
    if times:
        print(f"clustered {len(times)} frames, mean {np.mean(times):.1f} ms")
    return 1 if failed else 0


def _eval_dirs(
    pred_dir: Path, gt_dir: Path, classes: set[int], things: frozenset[int]
) -> PanopticAggregator:
    agg = PanopticAggregator(classes, thing_classes=things)
    stems = frame_stems(gt_dir, ".label")
    if not stems:
        raise FileNotFoundError(f"no .label files under {gt_dir}")
    for stem in stems:
        gt_path = gt_dir / f"{stem}.label"
        pred_path = pred_dir / f"{stem}.label"
        if not pred_path.exists():
            raise FileNotFoundError(f"missing prediction for frame {stem}")
        n = gt_path.stat().st_size // 4
        gt_sem, gt_inst = read_labels(gt_path, n)
        pr_sem, pr_inst = read_labels(pred_path, n)
        agg.add_frame(
            PanopticFrame(pr_sem, pr_inst), PanopticFrame(gt_sem, gt_inst)
        )
    return agg


def _class_union(pred_dir: Path, gt_dir: Path) -> set[int]:
    classes: set[int] = set()
    for d in (pred_dir, gt_dir):
        for stem in frame_stems(d, ".label"):
            n = (d / f"{stem}.label").stat().st_size // 4
            sem, _ = read_labels(d / f"{stem}.label", n)
            classes.update(np.unique(sem).tolist())
    classes.discard(0)
    return classes


def cmd_eval(args: argparse.Namespace) -> int:
    pred_dir, gt_dir = Path(args.pred), Path(args.gt)
    things = frozenset(args.things)
    try:
        classes = set(args.classes) if args.classes else _class_union(pred_dir, gt_dir)
        agg = _eval_dirs(pred_dir, gt_dir, classes, things)
    except (FileNotFoundError, ValueError) as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 1
    report = agg.report()
    print(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_json())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    scan_dir, gt_dir = Path(args.scans), Path(args.gt)
    if not args.voxel_sizes:
        print("ERROR empty voxel size list", file=sys.stderr)
        return 1
    sem_dir = Path(args.semantics) if args.semantics else gt_dir
    things = frozenset(args.things)

    stems = frame_stems(scan_dir, ".bin")
    if not stems:
        print(f"ERROR no scans under {scan_dir}", file=sys.stderr)
        return 1
    frames = []
    try:
        for stem in stems:
            cloud = read_scan(scan_dir / f"{stem}.bin")
            sem, _ = read_labels(sem_dir / f"{stem}.label", len(cloud))
            gt_sem, gt_inst = read_labels(gt_dir / f"{stem}.label", len(cloud))
            frames.append((cloud, sem, gt_sem, gt_inst))
    except (FileNotFoundError, ValueError, OSError) as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 1

    classes = set()
    for _, _, gt_sem, _ in frames:
        classes.update(np.unique(gt_sem).tolist())
    classes.discard(0)

    warm_kernels()  # keep jit compilation out of the timing columns
    rows = ["l,mean_m,mean_ms,PQ"]
    for l in args.voxel_sizes:
        base = argparse.Namespace(**vars(args))
        base.voxel_size = l
        cfg = _pipeline_config(base)
        agg = PanopticAggregator(classes, thing_classes=things)
        ms, ems = [], []
        for cloud, sem, gt_sem, gt_inst in frames:
            t0 = time.perf_counter()
            inst, diag = cluster_frame(cloud, sem, cfg)
            ems.append((time.perf_counter() - t0) * 1e3)
            ms.append(diag.m_seeds)
            agg.add_frame(PanopticFrame(sem, inst), PanopticFrame(gt_sem, gt_inst))
        pq = agg.report().pq
        rows.append(f"{l},{np.mean(ms):.1f},{np.mean(ems):.2f},{pq:.6f}")
    table = "\n".join(rows)
    print(table)
    if args.out:
        Path(args.out).write_text(table + "\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rangecluster",
        description="LiDAR instance clustering on spherical range images",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="cluster a directory of scans")
    p_cluster.add_argument("--scans", required=True, help="directory of .bin scans")
    p_cluster.add_argument("--semantics", required=True, help="directory of .label files")
    p_cluster.add_argument("--out", required=True, help="output directory")
    p_cluster.add_argument("--voxel-size", type=float, default=0.5)
    p_cluster.add_argument("--baseline", action="store_true", help="use single-pass CCL")
    p_cluster.add_argument("--threads", type=int, default=1, help="frame-level workers")
    _add_common(p_cluster)
    p_cluster.set_defaults(func=cmd_cluster)

    p_eval = sub.add_parser("eval", help="evaluate predictions against ground truth")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--gt", required=True)
    p_eval.add_argument("--json", default=None, help="also write the report as JSON")
    p_eval.add_argument(
        "--classes",
        type=lambda s: [int(v) for v in s.split(",")],
        default=None,
        help="evaluate only these class ids (default: all present)",
    )
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="voxel-size runtime/accuracy trade-off")
    p_sweep.add_argument("--scans", required=True)
    p_sweep.add_argument("--gt", required=True)
    p_sweep.add_argument("--semantics", default=None, help="semantic source (default: gt)")
    p_sweep.add_argument(
        "--voxel-sizes",
        type=lambda s: [float(v) for v in s.split(",")],
        default=[1.0, 0.5, 0.2],
    )
    p_sweep.add_argument("--out", default=None, help="write the table to a file")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
