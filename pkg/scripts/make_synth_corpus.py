#!/usr/bin/env python3
"""Generate a corpus of synthetic labeled frames in SemanticKITTI layout.

Writes <out>/scans/NNNNNN.bin and <out>/labels/NNNNNN.label with exact
ground-truth semantics and instances. Deterministic per seed.
"""

import argparse
from pathlib import Path

from rangecluster import random_scene, synth_scene, write_labels, write_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument("--frames", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--objects", type=int, default=8)
    ap.add_argument("--noise", type=float, default=0.0, help="range jitter sigma (m)")
    args = ap.parse_args()

    out = Path(args.out)
    scans = out / "scans"
    labels = out / "labels"
    scans.mkdir(parents=True, exist_ok=True)
    labels.mkdir(parents=True, exist_ok=True)

    for k in range(args.frames):
        seed = args.seed + k
        spec = random_scene(seed=seed, n_objects=args.objects, noise_sigma=args.noise)
        cloud, gt = synth_scene(spec, seed=seed)
        write_scan(cloud, scans / f"{k:06d}.bin")
        write_labels(gt.semantics, gt.instances, labels / f"{k:06d}.label")
        print(f"{k:06d}: {len(cloud)} points, {int(gt.instances.max())} instances")


if __name__ == "__main__":
    main()
