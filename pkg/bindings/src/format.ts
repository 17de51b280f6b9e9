/**
 * Wire formats shared with the clusterer: scans are packed little-endian
 * float32 (x, y, z, remission) quadruples, labels are packed little-endian
 * uint32 words with the semantic class in the low 16 bits and the instance
 * id in the high 16 bits.
 */

export function encodeScan(points: Float32Array): Buffer {
  const buf = Buffer.allocUnsafe(points.length * 4);
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  for (let i = 0; i < points.length; i++) {
    view.setFloat32(i * 4, points[i], true);
  }
  return buf;
}

export function encodeLabels(
  semantics: ArrayLike<number>,
  instances: ArrayLike<number>,
): Buffer {
  if (semantics.length !== instances.length) {
    throw new Error(
      `label encode: semantics length ${semantics.length} != instances length ${instances.length}`,
    );
  }
  const buf = Buffer.allocUnsafe(semantics.length * 4);
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  for (let i = 0; i < semantics.length; i++) {
    const sem = semantics[i];
    const inst = instances[i];
    if (!Number.isInteger(sem) || sem < 0 || sem >= 1 << 16) {
      throw new Error(`label encode: semantic id ${sem} does not fit 16 bits`);
    }
    if (!Number.isInteger(inst) || inst < 0 || inst >= 1 << 16) {
      throw new Error(`label encode: instance id ${inst} does not fit 16 bits`);
    }
    view.setUint32(i * 4, ((inst << 16) | sem) >>> 0, true);
  }
  return buf;
}

export function decodeLabels(buf: Buffer): {
  semantics: Uint32Array;
  instances: Uint32Array;
} {
  if (buf.length % 4 !== 0) {
    throw new Error(`label decode: byte length ${buf.length} is not a multiple of 4`);
  }
  const n = buf.length / 4;
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const semantics = new Uint32Array(n);
  const instances = new Uint32Array(n);
  for (let i = 0; i < n; i++) {
    const word = view.getUint32(i * 4, true);
    semantics[i] = word & 0xffff;
    instances[i] = word >>> 16;
  }
  return { semantics, instances };
}
