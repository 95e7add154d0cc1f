#!/usr/bin/env node
/**
 * relationsyn <train|generate|evaluate> [options]
 *
 * train:    --data DIR --model OUT.json [--m N] [--steps N] [--batch-size N]
 *           [--lr F] [--eval-interval N] [--patience N] [--seed N]
 * generate: --model M.json --data FILE.jsonl --out generations.jsonl
 * evaluate: --generations FILE.jsonl --references FILE.jsonl --out metrics.json
 */
import fs from 'node:fs';
import path from 'node:path';
import { parseArgs } from 'node:util';

import { encoderInputs, pairsOnlyEncoding, readRecords, writeJsonl } from './data.js';
import { evaluate } from './metrics.js';
import { DEFAULT_CONFIG, RelationSynModel, fromCheckpoint, toCheckpoint } from './model.js';
import { Tokenizer } from './tokenizer.js';
import { DEFAULT_TRAIN_CONFIG, train } from './train.js';

function fail(message: string): never {
  console.error(`error: ${message}`);
  process.exit(1);
}

function required(values: Record<string, string | undefined>, name: string): string {
  const value = values[name];
  if (!value) fail(`--${name} is required`);
  return value;
}

function runTrain(args: string[]): void {
  const { values } = parseArgs({
    args,
    options: {
      data: { type: 'string' },
      model: { type: 'string' },
      m: { type: 'string', default: '5' },
      steps: { type: 'string' },
      'batch-size': { type: 'string' },
      lr: { type: 'string' },
      'eval-interval': { type: 'string' },
      patience: { type: 'string' },
      seed: { type: 'string' },
    },
  });
  const dataDir = required(values, 'data');
  const modelPath = required(values, 'model');
  const m = Number(values.m);
  const trainRecords = readRecords(path.join(dataDir, 'train.jsonl'));
  const validRecords = fs.existsSync(path.join(dataDir, 'valid.jsonl'))
    ? readRecords(path.join(dataDir, 'valid.jsonl'))
    : [];
  const texts = trainRecords.flatMap((r) => [r.target, pairsOnlyEncoding(r.x, r.y), ...encoderInputs(r, m)]);
  const tokenizer = Tokenizer.fromTexts(texts);
  const model = new RelationSynModel(
    { ...DEFAULT_CONFIG, m, seed: values.seed ? Number(values.seed) : DEFAULT_CONFIG.seed },
    tokenizer,
  );
  const config = {
    ...DEFAULT_TRAIN_CONFIG,
    ...(values.steps ? { maxSteps: Number(values.steps) } : {}),
    ...(values['batch-size'] ? { batchSize: Number(values['batch-size']) } : {}),
    ...(values.lr ? { learningRate: Number(values.lr) } : {}),
    ...(values['eval-interval'] ? { evalIntervalSteps: Number(values['eval-interval']) } : {}),
    ...(values.patience ? { patience: Number(values.patience) } : {}),
  };
  const result = train(model, trainRecords, config, validRecords);
  fs.writeFileSync(modelPath, JSON.stringify(toCheckpoint(model)));
  console.log(
    `trained ${result.steps} steps: loss ${result.initialLoss.toFixed(4)} -> ${result.finalLoss.toFixed(4)}`,
  );
}

function runGenerate(args: string[]): void {
  const { values } = parseArgs({
    args,
    options: {
      model: { type: 'string' },
      data: { type: 'string' },
      out: { type: 'string' },
    },
  });
  const checkpoint = JSON.parse(fs.readFileSync(required(values, 'model'), 'utf-8'));
  const model = fromCheckpoint(checkpoint);
  const records = readRecords(required(values, 'data'));
  const outputs = records.map((record) => ({
    x: record.x,
    y: record.y,
    output: model.generate(record.x, record.y, encoderInputs(record, model.config.m)),
  }));
  writeJsonl(required(values, 'out'), outputs);
  console.log(`generated ${outputs.length} descriptions`);
}

function runEvaluate(args: string[]): void {
  const { values } = parseArgs({
    args,
    options: {
      generations: { type: 'string' },
      references: { type: 'string' },
      out: { type: 'string' },
    },
  });
  const generations = fs
    .readFileSync(required(values, 'generations'), 'utf-8')
    .split('\n')
    .filter((line) => line.trim())
    .map((line) => JSON.parse(line).output as string);
  const references = readRecords(required(values, 'references')).map((r) => r.target);
  const report = evaluate(generations, references);
  fs.writeFileSync(required(values, 'out'), JSON.stringify(report, null, 2) + '\n');
  console.log(`BLEU ${report.bleu.toFixed(2)}  ROUGE-L ${report.rougeL.toFixed(4)}  (${report.count} pairs)`);
}

const [command, ...rest] = process.argv.slice(2);
switch (command) {
  case 'train':
    runTrain(rest);
    break;
  case 'generate':
    runGenerate(rest);
    break;
  case 'evaluate':
    runEvaluate(rest);
    break;
  default:
    fail(`unknown command ${command ?? '(none)'}; expected train, generate or evaluate`);
}
