/**
 * Sequence-to-sequence generator over retrieved reasoning paths.
 *
 * Each input string is encoded independently by a shared transformer encoder
 * ("local synthesizing"); the per-path state sequences are concatenated along
 * the time axis and the decoder cross-attends over the whole concatenation
 * ("global synthesizing") while decoding the output sentence.
 */
import * as tf from '@tensorflow/tfjs';

import { pairsOnlyEncoding } from './data.js';
import { BOS, EOS, PAD, Tokenizer } from './tokenizer.js';

export interface ModelConfig {
  m: number; // maximum reasoning paths per example
  dModel: number;
  heads: number;
  dff: number;
  maxInputTokens: number;
  maxOutputTokens: number;
  seed: number;
}

export const DEFAULT_CONFIG: Omit<ModelConfig, 'm'> = {
  dModel: 32,
  heads: 2,
  dff: 64,
  maxInputTokens: 64,
  maxOutputTokens: 24,
  seed: 12,
};

function positionalTable(maxLen: number, dModel: number): tf.Tensor2D {
  const table: number[][] = [];
  for (let pos = 0; pos < maxLen; pos++) {
    const row: number[] = [];
    for (let i = 0; i < dModel; i++) {
      const angle = pos / Math.pow(10000, (2 * Math.floor(i / 2)) / dModel);
      row.push(i % 2 === 0 ? Math.sin(angle) : Math.cos(angle));
    }
    table.push(row);
  }
  return tf.tensor2d(table);
}

export class RelationSynModel {
  readonly config: ModelConfig;
  readonly tokenizer: Tokenizer;
  readonly variables: Map<string, tf.Variable>;
  private readonly positions: tf.Tensor2D;

  constructor(config: ModelConfig, tokenizer: Tokenizer, weights?: Map<string, tf.Tensor>) {
    this.config = config;
    this.tokenizer = tokenizer;
    this.variables = new Map();
    let seed = config.seed;
    const add = (name: string, shape: number[], zero = false) => {
      const init = weights?.get(name) ?? (zero
        ? tf.zeros(shape)
        : tf.randomNormal(shape, 0, 0.08, 'float32', seed++));
      this.variables.set(name, tf.variable(init as tf.Tensor, true, name));
    };
    const d = config.dModel;
    add('embedding', [tokenizer.size, d]);
    for (const block of ['enc.self', 'dec.self', 'dec.cross']) {
      for (const proj of ['q', 'k', 'v', 'o']) add(`${block}.${proj}`, [d, d]);
    }
    for (const block of ['enc', 'dec']) {
      add(`${block}.ff1`, [d, config.dff]);
      add(`${block}.ff1b`, [config.dff], true);
      add(`${block}.ff2`, [config.dff, d]);
      add(`${block}.ff2b`, [d], true);
    }
    for (const ln of ['enc.ln1', 'enc.ln2', 'dec.ln1', 'dec.ln2', 'dec.ln3', 'dec.lnf']) {
      const gamma = weights?.get(`${ln}.g`) ?? tf.ones([d]);
      const beta = weights?.get(`${ln}.b`) ?? tf.zeros([d]);
      this.variables.set(`${ln}.g`, tf.variable(gamma as tf.Tensor, true, `${ln}.g`));
      this.variables.set(`${ln}.b`, tf.variable(beta as tf.Tensor, true, `${ln}.b`));
    }
    add('out.w', [d, tokenizer.size]);
    add('out.b', [tokenizer.size], true);
    this.positions = positionalTable(Math.max(config.maxInputTokens, config.maxOutputTokens) + 2, d);
  }

  private v(name: string): tf.Variable {
    const variable = this.variables.get(name);
    if (!variable) throw new Error(`unknown weight ${name}`);
    return variable;
  }

  private layerNorm(x: tf.Tensor2D, name: string): tf.Tensor2D {
    const mean = x.mean(-1, true);
    const variance = x.sub(mean).square().mean(-1, true);
    const normed = x.sub(mean).div(variance.add(1e-5).sqrt());
    return normed.mul(this.v(`${name}.g`)).add(this.v(`${name}.b`)) as tf.Tensor2D;
  }

  private attention(
    block: string,
    queries: tf.Tensor2D,
    keysValues: tf.Tensor2D,
    causal: boolean,
  ): tf.Tensor2D {
    const { heads, dModel } = this.config;
    const dh = dModel / heads;
    const split = (x: tf.Tensor2D, w: tf.Variable) =>
      tf.matMul(x, w as unknown as tf.Tensor2D).reshape([x.shape[0], heads, dh]).transpose([1, 0, 2]);
    const q = split(queries, this.v(`${block}.q`));
    const k = split(keysValues, this.v(`${block}.k`));
    const v = split(keysValues, this.v(`${block}.v`));
    let scores = tf.matMul(q, k, false, true).div(Math.sqrt(dh));
    if (causal) {
      const n = queries.shape[0];
      const mask = tf.linalg.bandPart(tf.ones([n, n]), -1, 0);
      scores = scores.add(mask.sub(1).mul(1e9));
    }
    const context = tf.matMul(tf.softmax(scores), v); // [heads, Lq, dh]
    const merged = context.transpose([1, 0, 2]).reshape([queries.shape[0], dModel]) as tf.Tensor2D;
    return tf.matMul(merged, this.v(`${block}.o`) as unknown as tf.Tensor2D);
  }

  private feedForward(x: tf.Tensor2D, block: string): tf.Tensor2D {
    const hidden = tf.matMul(x, this.v(`${block}.ff1`) as unknown as tf.Tensor2D)
      .add(this.v(`${block}.ff1b`))
      .relu();
    return tf.matMul(hidden as tf.Tensor2D, this.v(`${block}.ff2`) as unknown as tf.Tensor2D)
      .add(this.v(`${block}.ff2b`)) as tf.Tensor2D;
  }

  private embed(ids: number[]): tf.Tensor2D {
    const gathered = tf.gather(this.v('embedding'), tf.tensor1d(ids, 'int32')) as tf.Tensor2D;
    const pos = this.positions.slice([0, 0], [ids.length, this.config.dModel]);
    return gathered.add(pos) as tf.Tensor2D;
  }

  /** Encode one input string into a state sequence of its own length. */
  encodeOne(text: string): tf.Tensor2D {
    const ids = this.tokenizer.encode(text, this.config.maxInputTokens);
    const x = this.embed(ids.length ? ids : [EOS]);
    const attended = x.add(this.attention('enc.self', this.layerNorm(x, 'enc.ln1'), this.layerNorm(x, 'enc.ln1'), false));
    return attended.add(this.feedForward(this.layerNorm(attended as tf.Tensor2D, 'enc.ln2'), 'enc')) as tf.Tensor2D;
  }

  /** Per-path encodings concatenated along the time axis. */
  encodeMemory(inputs: string[]): tf.Tensor2D {
    if (inputs.length === 0) throw new Error('cannot encode an example with no input strings');
    const states = inputs.map((text) => this.encodeOne(text));
    return states.length === 1 ? states[0] : (tf.concat(states, 0) as tf.Tensor2D);
  }

  private decodeStates(targetIds: number[], memory: tf.Tensor2D): tf.Tensor2D {
    const y = this.embed(targetIds);
    const afterSelf = y.add(
      this.attention('dec.self', this.layerNorm(y, 'dec.ln1'), this.layerNorm(y, 'dec.ln1'), true),
    );
    const afterCross = afterSelf.add(
      this.attention('dec.cross', this.layerNorm(afterSelf as tf.Tensor2D, 'dec.ln2'), memory, false),
    );
    return afterCross.add(this.feedForward(this.layerNorm(afterCross as tf.Tensor2D, 'dec.ln3'), 'dec')) as tf.Tensor2D;
  }

  logits(targetIds: number[], memory: tf.Tensor2D): tf.Tensor2D {
    const states = this.layerNorm(this.decodeStates(targetIds, memory), 'dec.lnf');
    return tf.matMul(states, this.v('out.w') as unknown as tf.Tensor2D).add(this.v('out.b')) as tf.Tensor2D;
  }

  /** Teacher-forced cross-entropy of one example. */
  exampleLoss(inputs: string[], target: string): tf.Scalar {
    const targetIds = this.tokenizer.encode(target, this.config.maxOutputTokens - 1);
    const decoderIn = [BOS, ...targetIds];
    const labels = [...targetIds, EOS];
    const memory = this.encodeMemory(inputs);
    const logits = this.logits(decoderIn, memory);
    const oneHot = tf.oneHot(tf.tensor1d(labels, 'int32'), this.tokenizer.size);
    return tf.losses.softmaxCrossEntropy(oneHot, logits) as tf.Scalar;
  }

  /** Greedy decoding: deterministic, never empty, stops at the end token or the cap. */
  generate(x: string, y: string, inputs: string[]): string {
    let used: string[];
    if (this.config.m === 0 || inputs.length === 0) {
      used = [pairsOnlyEncoding(x, y)];
    } else if (inputs.length > this.config.m) {
      console.warn(
        `relationsyn: ${inputs.length} inputs exceed m=${this.config.m}; keeping the top ${this.config.m}`,
      );
      used = inputs.slice(0, this.config.m);
    } else {
      used = inputs;
    }
    const output = tf.tidy(() => {
      const memory = this.encodeMemory(used);
      const ids: number[] = [BOS];
      for (let step = 0; step < this.config.maxOutputTokens; step++) {
        const logits = this.logits(ids, memory);
        const last = logits.slice([logits.shape[0] - 1, 0], [1, -1]).arraySync() as number[][];
        const row = last[0];
        row[PAD] = -Infinity; // never emit padding or a fresh start token
        row[BOS] = -Infinity;
        if (step === 0) row[EOS] = -Infinity; // guarantee a non-empty sentence
        let next = 0;
        for (let i = 1; i < row.length; i++) if (row[i] > row[next]) next = i;
        if (next === EOS) break;
        ids.push(next);
      }
      return ids.slice(1);
    });
    return this.tokenizer.decode(output);
  }

  dispose(): void {
    for (const variable of this.variables.values()) variable.dispose();
    this.positions.dispose();
  }
}

export interface Checkpoint {
  config: ModelConfig;
  words: string[];
  weights: Record<string, { shape: number[]; data: number[] }>;
}

export function toCheckpoint(model: RelationSynModel): Checkpoint {
  const weights: Checkpoint['weights'] = {};
  for (const [name, variable] of model.variables) {
    weights[name] = { shape: variable.shape as number[], data: Array.from(variable.dataSync()) };
  }
  return {
    config: model.config,
    words: model.tokenizer.words.slice(4), // specials are implicit
    weights,
  };
}

export function fromCheckpoint(checkpoint: Checkpoint): RelationSynModel {
  const tokenizer = new Tokenizer(checkpoint.words);
  const weights = new Map<string, tf.Tensor>();
  for (const [name, stored] of Object.entries(checkpoint.weights)) {
    weights.set(name, tf.tensor(stored.data, stored.shape));
  }
  return new RelationSynModel(checkpoint.config, tokenizer, weights);
}
