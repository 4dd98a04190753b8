/**
 * Text-annotation fetching against a Google-Vision-style TEXT_DETECTION
 * endpoint. The HTTP call is injectable for testing and for substituting
 * any OCR service that speaks the same request/response shape.
 *
 * Behavior: idempotent (samples with an existing annotation file are
 * skipped without an API call), retried with exponential backoff on
 * transient errors, aborted outright on auth failures, and per-image
 * failures fall back to an empty token list.
 */

import * as fs from 'fs';
import * as path from 'path';
import { SampleRecord } from './manifest';
import { writeAnnotationFile } from './storage';

export type HttpPostFn = (
  url: string,
  body: string,
  headers: Record<string, string>,
) => Promise<{ status: number; body: string }>;

export interface VisionConfig {
  endpoint: string;
  apiKey: string;
  httpPost?: HttpPostFn;
  maxRetries?: number;
  /** Base backoff delay in ms (doubles per retry). */
  backoffMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

export interface FetchSummary {
  written: string[];
  skipped: string[];
  failures: { id: string; error: string }[];
  apiCalls: number;
}

export class AuthError extends Error {}

const defaultHttpPost: HttpPostFn = async (url, body, headers) => {
  const response = await fetch(url, { method: 'POST', body, headers });
  return { status: response.status, body: await response.text() };
};

function parseTokens(responseBody: string): string[] {
  const obj = JSON.parse(responseBody);
  const annotations = obj?.responses?.[0]?.textAnnotations;
  if (!Array.isArray(annotations) || annotations.length === 0) return [];
  // first entry is the full text; the rest are individual words
  return annotations.slice(1).map((a: any) => String(a.description ?? ''));
}

async function callWithRetry(
  config: Required<Pick<VisionConfig, 'endpoint' | 'apiKey' | 'maxRetries' | 'backoffMs'>> & {
    httpPost: HttpPostFn;
    sleep: (ms: number) => Promise<void>;
  },
  imageBase64: string,
): Promise<string[]> {
  let lastError = '';
  for (let attempt = 0; attempt <= config.maxRetries; attempt++) {
    if (attempt > 0) {
      await config.sleep(config.backoffMs * 2 ** (attempt - 1));
    }
    const body = JSON.stringify({
      requests: [
        { image: { content: imageBase64 }, features: [{ type: 'TEXT_DETECTION' }] },
      ],
    });
    const { status, body: responseBody } = await config.httpPost(
      `${config.endpoint}?key=${config.apiKey}`,
      body,
      { 'Content-Type': 'application/json' },
    );
    if (status === 401 || status === 403) {
      throw new AuthError(`authentication failed (HTTP ${status})`);
    }
    if (status === 200) {
      return parseTokens(responseBody);
    }
    lastError = `HTTP ${status}`;
  }
  throw new Error(`gave up after ${config.maxRetries + 1} attempts: ${lastError}`);
}

export async function fetchAnnotations(
  records: SampleRecord[],
  outDir: string,
  config: VisionConfig,
): Promise<FetchSummary> {
  fs.mkdirSync(outDir, { recursive: true });
  let apiCalls = 0;
  const countingPost: HttpPostFn = async (url, body, headers) => {
    apiCalls++;
    return (config.httpPost ?? defaultHttpPost)(url, body, headers);
  };
  const resolved = {
    endpoint: config.endpoint,
    apiKey: config.apiKey,
    maxRetries: config.maxRetries ?? 3,
    backoffMs: config.backoffMs ?? 500,
    httpPost: countingPost,
    sleep: config.sleep ?? ((ms) => new Promise((r) => setTimeout(r, ms))),
  };
  const summary: FetchSummary = { written: [], skipped: [], failures: [], apiCalls: 0 };
  for (const record of records) {
    const outPath = path.join(outDir, `${record.id}.json`);
    if (fs.existsSync(outPath)) {
      summary.skipped.push(record.id);
      continue;
    }
    try {
      if (!record.image_path) {
        throw new Error('record has no image_path');
      }
      const imageBase64 = fs.readFileSync(record.image_path).toString('base64');
      const tokens = await callWithRetry(resolved, imageBase64);
      writeAnnotationFile({ id: record.id, tokens }, outPath);
      summary.written.push(record.id);
    } catch (err) {
      if (err instanceof AuthError) throw err;
      // per-image failure: record it and emit an empty annotation so the
      // sample's text vector stays all-zero downstream
      summary.failures.push({ id: record.id, error: (err as Error).message });
      writeAnnotationFile({ id: record.id, tokens: [] }, outPath);
    }
  }
  summary.apiCalls = apiCalls;
  return summary;
}
