/**
 * Appearance backbone: a small convolutional network whose penultimate
 * (global-average-pooled) layer yields the 2048-d appearance vector.
 *
 * By default the weights are generated from a fixed PRNG seed, so the
 * embedding is fully deterministic offline: the same image bytes always
 * produce the same feature file. A real pretrained model (any tf.LayersModel
 * whose pooled output is 2048-wide) can be supplied via `loadModel` when
 * weights are available locally.
 */

import * as tf from '@tensorflow/tfjs';
import { RgbImage, resizeBilinear } from './image';

export const FEATURE_DIM = 2048;

export interface BackboneConfig {
  /** Square input edge in pixels. */
  inputSize?: number;
  /** Weight-initialization seed for the built-in backbone. */
  seed?: number;
  /** Optional hook returning a custom model; overrides the built-in one. */
  loadModel?: () => Promise<tf.LayersModel>;
}

/** Deterministic PRNG (mulberry32) for reproducible weight initialization. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function seededTensor(shape: number[], rand: () => number, scale: number): tf.Tensor {
  const size = shape.reduce((a, b) => a * b, 1);
  const values = new Float32Array(size);
  for (let i = 0; i < size; i++) {
    values[i] = (rand() * 2 - 1) * scale;
  }
  return tf.tensor(values, shape);
}

export class Backbone {
  readonly inputSize: number;
  private model: tf.LayersModel | null = null;
  private readonly config: BackboneConfig;

  constructor(config: BackboneConfig = {}) {
    this.config = config;
    this.inputSize = config.inputSize ?? 64;
  }

  private buildDefault(): tf.LayersModel {
    const model = tf.sequential();
    const channels = [16, 32, 64];
    model.add(
      tf.layers.conv2d({
        inputShape: [this.inputSize, this.inputSize, 3],
        filters: channels[0],
        kernelSize: 3,
        strides: 2,
        padding: 'same',
        activation: 'relu',
      }),
    );
    for (const filters of channels.slice(1)) {
      model.add(
        tf.layers.conv2d({
          filters,
          kernelSize: 3,
          strides: 2,
          padding: 'same',
          activation: 'relu',
        }),
      );
    }
    model.add(tf.layers.conv2d({ filters: FEATURE_DIM, kernelSize: 1, activation: 'relu' }));
    model.add(tf.layers.globalAveragePooling2d({}));

    const rand = mulberry32(this.config.seed ?? 1234);
    for (const layer of model.layers) {
      const newWeights = layer.getWeights().map((w) => {
        const fanIn = w.shape.slice(0, -1).reduce((a, b) => a * (b ?? 1), 1);
        return seededTensor(w.shape as number[], rand, Math.sqrt(3 / Math.max(fanIn, 1)));
      });
      layer.setWeights(newWeights);
    }
    return model;
  }

  private async getModel(): Promise<tf.LayersModel> {
    if (!this.model) {
      this.model = this.config.loadModel ? await this.config.loadModel() : this.buildDefault();
    }
    return this.model;
  }

  /** Embed one decoded image into the 2048-d appearance vector. */
  async embed(image: RgbImage): Promise<Float32Array> {
    const model = await this.getModel();
    const pixels = resizeBilinear(image, this.inputSize);
    const output = tf.tidy(() => {
      const input = tf.tensor4d(pixels, [1, this.inputSize, this.inputSize, 3]);
      return model.predict(input) as tf.Tensor;
    });
    const values = (await output.data()) as Float32Array;
    output.dispose();
    if (values.length !== FEATURE_DIM) {
      throw new Error(`backbone produced ${values.length} dims, expected ${FEATURE_DIM}`);
    }
    return new Float32Array(values);
  }
}
