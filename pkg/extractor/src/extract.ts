/** Batch feature extraction over a manifest into AVEC feature files. */

import * as fs from 'fs';
import * as path from 'path';
import { Backbone, BackboneConfig } from './backbone';
import { decodeImage } from './image';
import { SampleRecord } from './manifest';
import { writeFeatureFile } from './storage';

export interface ExtractionSummary {
  written: string[];
  skipped: string[];
  failures: { id: string; error: string }[];
}

export interface ExtractOptions extends BackboneConfig {
  /** Skip samples whose feature file already exists. */
  skipExisting?: boolean;
}

export async function extractFeatures(
  records: SampleRecord[],
  outDir: string,
  options: ExtractOptions = {},
): Promise<ExtractionSummary> {
  fs.mkdirSync(outDir, { recursive: true });
  const backbone = new Backbone(options);
  const summary: ExtractionSummary = { written: [], skipped: [], failures: [] };
  for (const record of records) {
    const outPath = path.join(outDir, `${record.id}.avec`);
    if (options.skipExisting && fs.existsSync(outPath)) {
      summary.skipped.push(record.id);
      continue;
    }
    try {
      if (!record.image_path) {
        throw new Error('record has no image_path');
      }
      const features = await backbone.embed(decodeImage(record.image_path));
      writeFeatureFile(features, outPath);
      summary.written.push(record.id);
    } catch (err) {
      summary.failures.push({ id: record.id, error: (err as Error).message });
    }
  }
  return summary;
}
