/**
 * Minimal image decoding: PNG (via pngjs) and binary PPM (P6).
 * Images are decoded to RGB float32 in [0, 1] and bilinearly resized to the
 * backbone's square input size; degenerate sizes (even 1x1) are fine.
 */

import * as fs from 'fs';
import { PNG } from 'pngjs';

export interface RgbImage {
  width: number;
  height: number;
  /** RGB interleaved, length = width * height * 3, values in [0, 1]. */
  data: Float32Array;
}

function decodePng(buffer: Buffer): RgbImage {
  const png = PNG.sync.read(buffer);
  const data = new Float32Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    data[3 * i] = png.data[4 * i] / 255;
    data[3 * i + 1] = png.data[4 * i + 1] / 255;
    data[3 * i + 2] = png.data[4 * i + 2] / 255;
  }
  return { width: png.width, height: png.height, data };
}

function decodePpm(buffer: Buffer): RgbImage {
  // P6 <width> <height> <maxval>\n followed by binary RGB triples
  const headerEnd = findPpmHeaderEnd(buffer);
  const header = buffer.subarray(0, headerEnd).toString('ascii');
  const fields = header.replace(/#[^\n]*/g, ' ').trim().split(/\s+/);
  if (fields[0] !== 'P6' || fields.length < 4) {
    throw new Error('unsupported PPM header');
  }
  const width = parseInt(fields[1], 10);
  const height = parseInt(fields[2], 10);
  const maxval = parseInt(fields[3], 10);
  const pixels = buffer.subarray(headerEnd + 1);
  if (pixels.length < width * height * 3) {
    throw new Error(`PPM payload truncated: ${pixels.length} bytes for ${width}x${height}`);
  }
  const data = new Float32Array(width * height * 3);
  for (let i = 0; i < width * height * 3; i++) {
    data[i] = pixels[i] / maxval;
  }
  return { width, height, data };
}

function findPpmHeaderEnd(buffer: Buffer): number {
  // header is the first 4 whitespace-separated fields; returns the index of
  // the single whitespace byte that terminates the maxval field
  let fieldsSeen = 0;
  let inField = false;
  for (let i = 0; i < buffer.length; i++) {
    const isSpace = /\s/.test(String.fromCharCode(buffer[i]));
    if (!isSpace && !inField) {
      inField = true;
    } else if (isSpace && inField) {
      inField = false;
      fieldsSeen++;
      if (fieldsSeen === 4) return i;
    }
  }
  throw new Error('unsupported PPM header');
}

export function decodeImage(filePath: string): RgbImage {
  const buffer = fs.readFileSync(filePath);
  if (buffer.length >= 8 && buffer.readUInt32BE(0) === 0x89504e47) {
    return decodePng(buffer);
  }
  if (buffer.length >= 2 && buffer.subarray(0, 2).toString('ascii') === 'P6') {
    return decodePpm(buffer);
  }
  throw new Error(`${filePath}: unsupported image format (PNG and P6 PPM supported)`);
}

export function resizeBilinear(image: RgbImage, size: number): Float32Array {
  const out = new Float32Array(size * size * 3);
  const scaleX = image.width / size;
  const scaleY = image.height / size;
  for (let y = 0; y < size; y++) {
    const srcY = Math.min((y + 0.5) * scaleY - 0.5, image.height - 1);
    const y0 = Math.max(0, Math.floor(srcY));
    const y1 = Math.min(image.height - 1, y0 + 1);
    const fy = Math.max(0, srcY - y0);
    for (let x = 0; x < size; x++) {
      const srcX = Math.min((x + 0.5) * scaleX - 0.5, image.width - 1);
      const x0 = Math.max(0, Math.floor(srcX));
      const x1 = Math.min(image.width - 1, x0 + 1);
      const fx = Math.max(0, srcX - x0);
      for (let c = 0; c < 3; c++) {
        const p00 = image.data[3 * (y0 * image.width + x0) + c];
        const p01 = image.data[3 * (y0 * image.width + x1) + c];
        const p10 = image.data[3 * (y1 * image.width + x0) + c];
        const p11 = image.data[3 * (y1 * image.width + x1) + c];
        const top = p00 + (p01 - p00) * fx;
        const bottom = p10 + (p11 - p10) * fx;
        out[3 * (y * size + x) + c] = top + (bottom - top) * fy;
      }
    }
  }
  return out;
}
