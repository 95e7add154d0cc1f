export { GenerationRecord, encoderInputs, pairsOnlyEncoding, readRecords } from './data.js';
export { MetricReport, corpusBleu, evaluate, rougeL } from './metrics.js';
export {
  Checkpoint,
  DEFAULT_CONFIG,
  ModelConfig,
  RelationSynModel,
  fromCheckpoint,
  toCheckpoint,
} from './model.js';
export { BOS, EOS, PAD, Tokenizer, UNK } from './tokenizer.js';
export { DEFAULT_TRAIN_CONFIG, TrainConfig, TrainResult, datasetLoss, train } from './train.js';
