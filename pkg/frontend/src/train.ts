/** Training loop: Adam over shuffled batches with periodic validation and
 * patience-based early stopping. */
import * as tf from '@tensorflow/tfjs';

import { GenerationRecord, encoderInputs } from './data.js';
import { RelationSynModel } from './model.js';

export interface TrainConfig {
  batchSize: number;
  learningRate: number;
  evalIntervalSteps: number;
  patience: number; // evaluations without improvement before stopping
  maxSteps: number;
}

export const DEFAULT_TRAIN_CONFIG: TrainConfig = {
  batchSize: 8,
  learningRate: 1e-4,
  evalIntervalSteps: 5000,
  patience: 20,
  maxSteps: 200000,
};

export interface TrainResult {
  steps: number;
  initialLoss: number;
  finalLoss: number;
  stepLosses: number[];
  validLosses: number[];
}

/** Deterministic shuffle source so runs are reproducible. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function datasetLoss(model: RelationSynModel, records: GenerationRecord[]): number {
  let total = 0;
  for (const record of records) {
    total += tf.tidy(() =>
      model.exampleLoss(encoderInputs(record, model.config.m), record.target).dataSync()[0],
    );
  }
  return total / records.length;
}

export function train(
  model: RelationSynModel,
  records: GenerationRecord[],
  config: TrainConfig,
  validRecords: GenerationRecord[] = [],
): TrainResult {
  if (records.length === 0) {
    throw new Error('training set is empty');
  }
  for (const record of records) {
    if (model.config.m > 0 && record.inputs.length > model.config.m) {
      throw new Error(
        `record (${record.x}, ${record.y}) has ${record.inputs.length} inputs; model expects at most ${model.config.m}`,
      );
    }
  }
  const optimizer = tf.train.adam(config.learningRate);
  const rand = mulberry32(model.config.seed);
  const initialLoss = datasetLoss(model, records);
  const stepLosses: number[] = [];
  const validLosses: number[] = [];
  let order: number[] = [];
  let cursor = 0;
  let bestValid = Infinity;
  let evaluationsSinceBest = 0;
  let steps = 0;
  const variables = [...model.variables.values()];

  while (steps < config.maxSteps) {
    const batch: GenerationRecord[] = [];
    for (let i = 0; i < config.batchSize; i++) {
      if (cursor >= order.length) {
        order = records.map((_, idx) => idx);
        for (let j = order.length - 1; j > 0; j--) {
          const k = Math.floor(rand() * (j + 1));
          [order[j], order[k]] = [order[k], order[j]];
        }
        cursor = 0;
      }
      batch.push(records[order[cursor++]]);
    }
    const { value, grads } = tf.variableGrads(
      () =>
        tf.tidy(() => {
          const losses = batch.map((record) =>
            model.exampleLoss(encoderInputs(record, model.config.m), record.target),
          );
          return tf.stack(losses).mean() as tf.Scalar;
        }),
      variables,
    );
    optimizer.applyGradients(Object.entries(grads).map(([name, tensor]) => ({ name, tensor })));
    stepLosses.push(value.dataSync()[0]);
    value.dispose();
    for (const grad of Object.values(grads)) grad.dispose();
    steps++;

    if (validRecords.length > 0 && steps % config.evalIntervalSteps === 0) {
      const validLoss = datasetLoss(model, validRecords);
      validLosses.push(validLoss);
      if (validLoss < bestValid - 1e-6) {
        bestValid = validLoss;
        evaluationsSinceBest = 0;
      } else {
        evaluationsSinceBest++;
        if (evaluationsSinceBest >= config.patience) break;
      }
    }
  }
  optimizer.dispose();
  return {
    steps,
    initialLoss,
    finalLoss: datasetLoss(model, records),
    stepLosses,
    validLosses,
  };
}
