/**
 * Typed-array front end for the rangecluster LiDAR instance clusterer.
 *
 * Two functions: `clusterPoints` turns an N x 4 point buffer plus per-point
 * semantic classes into per-point instance ids, `panopticQuality` scores a
 * predicted (semantics, instances) pair against ground truth. Arrays move
 * through the clusterer's own file formats and CLI, so results are
 * bit-identical to command-line runs on the same data.
 */

import { mkdir, readFile, writeFile } from "node:fs/promises";
import { join } from "node:path";

import { decodeLabels, encodeLabels, encodeScan } from "./format.js";
import { runCli, withTempDir } from "./runner.js";

export const VERSION = "0.1.0";

export interface ClusterOptions {
  /** Cubic voxel edge in meters seeding the local labels (default 0.5). */
  voxelSize?: number;
  /** Angle-test threshold in degrees (default 10). */
  thetaDeg?: number;
  /** Range-image height (default 64). */
  rows?: number;
  /** Range-image width (default 2048). */
  cols?: number;
  /** Vertical field of view, degrees (defaults 3 up, -25 down). */
  fovUpDeg?: number;
  fovDownDeg?: number;
  /** Countable ("thing") class ids; clusterer default when omitted. */
  thingClasses?: number[];
  /** Ground-plane footprint merge stage (default on). */
  postprocess?: boolean;
  /** Azimuth wraparound (default on). */
  wrap?: boolean;
  /** Use the single-pass reference clusterer instead. */
  baseline?: boolean;
  /** Python interpreter hosting the clusterer (default: $RANGECLUSTER_PYTHON or python3). */
  pythonBin?: string;
}

function clusterArgs(opts: ClusterOptions): string[] {
  const args: string[] = [];
  if (opts.voxelSize !== undefined) args.push("--voxel-size", String(opts.voxelSize));
  if (opts.thetaDeg !== undefined) args.push("--theta", String(opts.thetaDeg));
  if (opts.rows !== undefined) args.push("--rows", String(opts.rows));
  if (opts.cols !== undefined) args.push("--cols", String(opts.cols));
  if (opts.fovUpDeg !== undefined) args.push("--fov-up", String(opts.fovUpDeg));
  if (opts.fovDownDeg !== undefined) args.push("--fov-down", String(opts.fovDownDeg));
  if (opts.thingClasses !== undefined) args.push("--things", opts.thingClasses.join(","));
  if (opts.postprocess === false) args.push("--no-postprocess");
  if (opts.wrap === false) args.push("--no-wrap");
  if (opts.baseline) args.push("--baseline");
  return args;
}

/**
 * Cluster one frame.
 *
 * @param points packed x, y, z, remission quadruples (length 4 * N)
 * @param semantics per-point semantic class ids (length N, each < 2^16)
 * @returns per-point instance ids; 0 marks points without an instance
 */
export async function clusterPoints(
  points: Float32Array,
  semantics: Uint32Array | Int32Array | Uint16Array,
  opts: ClusterOptions = {},
): Promise<Uint32Array> {
  if (points.length % 4 !== 0) {
    throw new Error(
      `cluster input: points length ${points.length} is not a multiple of 4 (need N x 4 layout)`,
    );
  }
  const n = points.length / 4;
  if (semantics.length !== n) {
    throw new Error(
      `cluster input: semantics length ${semantics.length} does not match ${n} points`,
    );
  }

  return withTempDir(async (dir) => {
    const scans = join(dir, "scans");
    const sem = join(dir, "sem");
    const out = join(dir, "out");
    await Promise.all([mkdir(scans), mkdir(sem), mkdir(out)]);
    await writeFile(join(scans, "000000.bin"), encodeScan(points));
    await writeFile(
      join(sem, "000000.label"),
      encodeLabels(semantics, new Uint32Array(n)),
    );

    await runCli(
      "cluster",
      ["cluster", "--scans", scans, "--semantics", sem, "--out", out, ...clusterArgs(opts)],
      opts.pythonBin,
    );

    const labels = decodeLabels(await readFile(join(out, "000000.label")));
    if (labels.instances.length !== n) {
      throw new Error(
        `cluster output: expected ${n} labels, got ${labels.instances.length}`,
      );
    }
    return labels.instances;
  });
}

export interface PanopticOptions {
  /** Restrict scoring to these class ids (default: all present). */
  classes?: number[];
  /** Countable ("thing") class ids; clusterer default when omitted. */
  thingClasses?: number[];
  pythonBin?: string;
}

export interface PanopticReport {
  PQ: number;
  PQ_dagger: number;
  RQ: number;
  SQ: number;
  mIoU: number;
  PQ_things: number;
  RQ_things: number;
  SQ_things: number;
  PQ_stuff: number;
  RQ_stuff: number;
  SQ_stuff: number;
  per_class: Record<
    string,
    { PQ: number; RQ: number; SQ: number; PQ_dagger: number; IoU: number; TP: number; FP: number; FN: number }
  >;
}

/** Score a predicted (semantics, instances) pair against ground truth. */
export async function panopticQuality(
  predSemantics: ArrayLike<number>,
  predInstances: ArrayLike<number>,
  gtSemantics: ArrayLike<number>,
  gtInstances: ArrayLike<number>,
  opts: PanopticOptions = {},
): Promise<PanopticReport> {
  if (
    predSemantics.length !== predInstances.length ||
    gtSemantics.length !== gtInstances.length ||
    predSemantics.length !== gtSemantics.length
  ) {
    throw new Error(
      `panoptic input: array lengths differ (pred ${predSemantics.length}/${predInstances.length}, gt ${gtSemantics.length}/${gtInstances.length})`,
    );
  }

  return withTempDir(async (dir) => {
    const pred = join(dir, "pred");
    const gt = join(dir, "gt");
    await Promise.all([mkdir(pred), mkdir(gt)]);
    await writeFile(join(pred, "000000.label"), encodeLabels(predSemantics, predInstances));
    await writeFile(join(gt, "000000.label"), encodeLabels(gtSemantics, gtInstances));

    const report = join(dir, "report.json");
    const args = ["eval", "--pred", pred, "--gt", gt, "--json", report];
    if (opts.classes !== undefined) args.push("--classes", opts.classes.join(","));
    if (opts.thingClasses !== undefined) args.push("--things", opts.thingClasses.join(","));
    await runCli("eval", args, opts.pythonBin);
    return JSON.parse(await readFile(report, "utf8")) as PanopticReport;
  });
}
