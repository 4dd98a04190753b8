import { execFileSync } from 'child_process';
import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { afterAll, describe, expect, it } from 'vitest';
import {
  readAnnotationFile,
  readFeatureFile,
  writeAnnotationFile,
  writeFeatureFile,
} from '../src/storage';

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'pf-storage-'));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe('feature files', () => {
  it('round-trips and has the exact length', () => {
    const p = path.join(tmp, 'a.avec');
    const values = new Float32Array([1.0, -2.5, 0.0]);
    writeFeatureFile(values, p);
    expect(fs.statSync(p).size).toBe(24);
    expect(Array.from(readFeatureFile(p))).toEqual([1.0, -2.5, 0.0]);
  });

  it('rejects bad magic', () => {
    const p = path.join(tmp, 'bad.avec');
    fs.writeFileSync(p, Buffer.concat([Buffer.from('AVEC9999'), Buffer.alloc(8)]));
    expect(() => readFeatureFile(p)).toThrow(/bad magic/);
  });

  it('rejects length mismatch', () => {
    const p = path.join(tmp, 'short.avec');
    const header = Buffer.alloc(12);
    header.write('AVEC0001', 0, 'ascii');
    header.writeUInt32LE(5, 8);
    fs.writeFileSync(p, header);
    expect(() => readFeatureFile(p)).toThrow(/declared dim 5/);
  });

  it('refuses non-finite values', () => {
    expect(() => writeFeatureFile(new Float32Array([NaN]), path.join(tmp, 'n.avec'))).toThrow(
      /non-finite/,
    );
  });

  it('is accepted by the Python toolkit reader', () => {
    const p = path.join(tmp, 'cross.avec');
    const values = new Float32Array(2048);
    for (let i = 0; i < values.length; i++) values[i] = Math.fround(Math.sin(i) * 3);
    writeFeatureFile(values, p);
    const out = execFileSync('python3', [
      '-c',
      `from posterfuse.storage import read_feature\nv = read_feature(${JSON.stringify(p)})\nprint(len(v), float(v[7]))`,
    ]).toString();
    const [dim, sample] = out.trim().split(' ');
    expect(dim).toBe('2048');
    expect(parseFloat(sample)).toBeCloseTo(values[7], 6);
  });
});

describe('annotation files', () => {
  it('round-trips unicode tokens', () => {
    const p = path.join(tmp, 'a.json');
    writeAnnotationFile({ id: 'x1', tokens: ['Vote', '2020', 'wähle'] }, p);
    expect(readAnnotationFile(p)).toEqual({ id: 'x1', tokens: ['Vote', '2020', 'wähle'] });
  });

  it('is accepted by the Python toolkit reader', () => {
    const p = path.join(tmp, 'cross.json');
    writeAnnotationFile({ id: 'x2', tokens: ['vote', 'now'] }, p);
    const out = execFileSync('python3', [
      '-c',
      `from posterfuse.storage import read_annotation\na = read_annotation(${JSON.stringify(p)}, expected_id='x2')\nprint(a.id, list(a.tokens))`,
    ]).toString();
    expect(out.trim()).toBe("x2 ['vote', 'now']");
  });
});
