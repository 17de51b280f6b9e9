/**
 * Child-process plumbing: every call shells out to the clusterer CLI in a
 * private temp directory. Calls never block the event loop, so concurrent
 * invocations overlap across cores.
 */

import { execFile } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

export function pythonBin(override?: string): string {
  return override ?? process.env.RANGECLUSTER_PYTHON ?? "python3";
}

export async function runCli(
  stage: string,
  args: string[],
  python?: string,
): Promise<{ stdout: string; stderr: string }> {
  try {
    return await execFileAsync(pythonBin(python), ["-m", "rangecluster", ...args], {
      maxBuffer: 64 * 1024 * 1024,
    });
  } catch (err) {
    const e = err as { stderr?: string; message?: string };
    const detail = e.stderr?.trim() || e.message || String(err);
    throw new Error(`${stage}: clusterer CLI failed: ${detail}`);
  }
}

export async function withTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "rangecluster-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}
