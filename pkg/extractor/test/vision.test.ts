import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { afterAll, describe, expect, it } from 'vitest';
import { SampleRecord } from '../src/manifest';
import { readAnnotationFile } from '../src/storage';
import { AuthError, fetchAnnotations, HttpPostFn } from '../src/vision';

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'pf-vision-'));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

const noSleep = () => Promise.resolve();

function record(id: string): SampleRecord {
  const imagePath = path.join(tmp, `${id}.bin`);
  fs.writeFileSync(imagePath, Buffer.from(`image-bytes-${id}`));
  return {
    id,
    image_path: imagePath,
    category: 'PoliticalPoster',
    annotation_ref: 'unused',
    feature_ref: 'unused',
  };
}

function visionResponse(words: string[]): string {
  return JSON.stringify({
    responses: [
      {
        textAnnotations: [
          { description: words.join(' ') },
          ...words.map((w) => ({ description: w })),
        ],
      },
    ],
  });
}

function mockPost(handler: (call: number) => { status: number; body: string }): {
  post: HttpPostFn;
  calls: () => number;
} {
  let calls = 0;
  return {
    post: async () => handler(calls++),
    calls: () => calls,
  };
}

describe('fetchAnnotations', () => {
  it('writes recognized words', async () => {
    const { post } = mockPost(() => ({ status: 200, body: visionResponse(['VOTE', '2020']) }));
    const outDir = path.join(tmp, 'ann1');
    const summary = await fetchAnnotations([record('a')], outDir, {
      endpoint: 'http://mock/v1',
      apiKey: 'k',
      httpPost: post,
      sleep: noSleep,
    });
    expect(summary.written).toEqual(['a']);
    expect(readAnnotationFile(path.join(outDir, 'a.json'))).toEqual({
      id: 'a',
      tokens: ['VOTE', '2020'],
    });
  });

  it('writes an empty token list for images without text', async () => {
    const { post } = mockPost(() => ({ status: 200, body: JSON.stringify({ responses: [{}] }) }));
    const outDir = path.join(tmp, 'ann2');
    await fetchAnnotations([record('b')], outDir, {
      endpoint: 'http://mock/v1',
      apiKey: 'k',
      httpPost: post,
      sleep: noSleep,
    });
    expect(readAnnotationFile(path.join(outDir, 'b.json')).tokens).toEqual([]);
  });

  it('is idempotent: second run issues zero API calls', async () => {
    const { post, calls } = mockPost(() => ({ status: 200, body: visionResponse(['x']) }));
    const outDir = path.join(tmp, 'ann3');
    const config = { endpoint: 'http://mock/v1', apiKey: 'k', httpPost: post, sleep: noSleep };
    const first = await fetchAnnotations([record('c'), record('d')], outDir, config);
    expect(first.apiCalls).toBe(2);
    const second = await fetchAnnotations([record('c'), record('d')], outDir, config);
    expect(second.apiCalls).toBe(0);
    expect(second.skipped.sort()).toEqual(['c', 'd']);
    expect(calls()).toBe(2);
  });

  it('retries transient errors with backoff', async () => {
    const { post, calls } = mockPost((call) =>
      call < 2 ? { status: 503, body: '' } : { status: 200, body: visionResponse(['ok']) },
    );
    const waits: number[] = [];
    const outDir = path.join(tmp, 'ann4');
    const summary = await fetchAnnotations([record('e')], outDir, {
      endpoint: 'http://mock/v1',
      apiKey: 'k',
      httpPost: post,
      backoffMs: 100,
      sleep: async (ms) => {
        waits.push(ms);
      },
    });
    expect(summary.written).toEqual(['e']);
    expect(calls()).toBe(3);
    expect(waits).toEqual([100, 200]);
  });

  it('records per-image failure with empty tokens after retries exhausted', async () => {
    const { post } = mockPost(() => ({ status: 500, body: '' }));
    const outDir = path.join(tmp, 'ann5');
    const summary = await fetchAnnotations([record('f')], outDir, {
      endpoint: 'http://mock/v1',
      apiKey: 'k',
      httpPost: post,
      maxRetries: 1,
      sleep: noSleep,
    });
    expect(summary.failures).toHaveLength(1);
    expect(readAnnotationFile(path.join(outDir, 'f.json')).tokens).toEqual([]);
  });

  it('aborts outright on auth failure', async () => {
    const { post } = mockPost(() => ({ status: 403, body: '' }));
    await expect(
      fetchAnnotations([record('g')], path.join(tmp, 'ann6'), {
        endpoint: 'http://mock/v1',
        apiKey: 'bad',
        httpPost: post,
        sleep: noSleep,
      }),
    ).rejects.toThrow(AuthError);
  });
});
