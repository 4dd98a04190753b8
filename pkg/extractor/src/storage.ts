/**
 * On-disk formats shared with the Python toolkit.
 *
 * Feature file: 8-byte magic "AVEC0001", uint32 LE dim, then dim float32 LE
 * values. Annotation file: JSON {"id": string, "tokens": string[]}.
 * Writes are atomic (temp file + rename).
 */

import * as fs from 'fs';
import * as path from 'path';

export const FEATURE_MAGIC = 'AVEC0001';

export interface Annotation {
  id: string;
  tokens: string[];
}

function atomicWrite(filePath: string, data: Buffer): void {
  const dir = path.dirname(path.resolve(filePath));
  const tmp = path.join(dir, `.tmp-${process.pid}-${Math.random().toString(36).slice(2)}`);
  fs.writeFileSync(tmp, data);
  try {
    fs.renameSync(tmp, filePath);
  } catch (err) {
    fs.rmSync(tmp, { force: true });
    throw err;
  }
}

export function writeFeatureFile(values: Float32Array, filePath: string): void {
  for (const v of values) {
    if (!Number.isFinite(v)) {
      throw new Error(`refusing to write non-finite feature value to ${filePath}`);
    }
  }
  const header = Buffer.alloc(12);
  header.write(FEATURE_MAGIC, 0, 'ascii');
  header.writeUInt32LE(values.length, 8);
  const payload = Buffer.alloc(4 * values.length);
  for (let i = 0; i < values.length; i++) {
    payload.writeFloatLE(values[i], 4 * i);
  }
  atomicWrite(filePath, Buffer.concat([header, payload]));
}

export function readFeatureFile(filePath: string): Float32Array {
  const data = fs.readFileSync(filePath);
  if (data.length < 12) {
    throw new Error(`${filePath}: truncated header (${data.length} bytes)`);
  }
  const magic = data.subarray(0, 8).toString('ascii');
  if (magic !== FEATURE_MAGIC) {
    throw new Error(`${filePath}: bad magic "${magic}"`);
  }
  const dim = data.readUInt32LE(8);
  if (data.length !== 12 + 4 * dim) {
    throw new Error(
      `${filePath}: declared dim ${dim} implies ${12 + 4 * dim} bytes, file has ${data.length}`,
    );
  }
  const values = new Float32Array(dim);
  for (let i = 0; i < dim; i++) {
    values[i] = data.readFloatLE(12 + 4 * i);
  }
  return values;
}

export function writeAnnotationFile(annotation: Annotation, filePath: string): void {
  atomicWrite(filePath, Buffer.from(JSON.stringify(annotation), 'utf-8'));
}

export function readAnnotationFile(filePath: string): Annotation {
  const obj = JSON.parse(fs.readFileSync(filePath, 'utf-8'));
  if (typeof obj.id !== 'string' || !Array.isArray(obj.tokens)) {
    throw new Error(`${filePath}: missing "id" or "tokens"`);
  }
  return { id: obj.id, tokens: obj.tokens.map(String) };
}
