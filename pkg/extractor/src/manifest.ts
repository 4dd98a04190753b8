/** JSON Lines dataset manifest, matching the Python toolkit's schema. */

import * as fs from 'fs';

export interface SampleRecord {
  id: string;
  image_path: string | null;
  category: string;
  annotation_ref: string;
  feature_ref: string;
}

export function loadManifest(filePath: string): SampleRecord[] {
  const records: SampleRecord[] = [];
  const seen = new Set<string>();
  const lines = fs.readFileSync(filePath, 'utf-8').split('\n');
  lines.forEach((line, i) => {
    const trimmed = line.trim();
    if (!trimmed) return;
    let obj: any;
    try {
      obj = JSON.parse(trimmed);
    } catch (err) {
      throw new Error(`${filePath}:${i + 1}: invalid JSON`);
    }
    for (const key of ['id', 'category', 'annotation_ref', 'feature_ref']) {
      if (!(key in obj)) throw new Error(`${filePath}:${i + 1}: missing key "${key}"`);
    }
    if (seen.has(obj.id)) throw new Error(`${filePath}:${i + 1}: duplicate id "${obj.id}"`);
    seen.add(obj.id);
    records.push({
      id: String(obj.id),
      image_path: obj.image_path ?? null,
      category: String(obj.category),
      annotation_ref: String(obj.annotation_ref),
      feature_ref: String(obj.feature_ref),
    });
  });
  return records;
}
