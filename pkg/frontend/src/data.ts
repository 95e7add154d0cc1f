/**
 * Generation records and the encoding contract shared with the graph pipeline.
 *
 * Records arrive as JSONL {"x", "y", "target", "inputs"} files written by the
 * graph toolkit's export stage and are consumed unchanged.
 */
import fs from 'node:fs';

export interface GenerationRecord {
  x: string;
  y: string;
  target: string;
  inputs: string[];
}

/** The path-free encoding: all a zero-path model ever sees. */
export function pairsOnlyEncoding(x: string, y: string): string {
  return `entity1: ${x} entity2: ${y}`;
}

export function readRecords(path: string): GenerationRecord[] {
  const records: GenerationRecord[] = [];
  const lines = fs.readFileSync(path, 'utf-8').split('\n');
  for (const line of lines) {
    if (!line.trim()) continue;
    const obj = JSON.parse(line);
    if (typeof obj.x !== 'string' || typeof obj.y !== 'string' || typeof obj.target !== 'string') {
      throw new Error(`${path}: record missing x/y/target: ${line.slice(0, 80)}`);
    }
    records.push({ x: obj.x, y: obj.y, target: obj.target, inputs: obj.inputs ?? [] });
  }
  return records;
}

/**
 * Encoder inputs for one record under a fixed path budget m.
 *
 * A zero-path model never reads the stored inputs; it rebuilds the bare
 * entity-pair string from x and y. Records with no stored paths fall back to
 * the same string.
 */
export function encoderInputs(record: GenerationRecord, m: number): string[] {
  if (m === 0) {
    return [pairsOnlyEncoding(record.x, record.y)];
  }
  if (record.inputs.length === 0) {
    return [pairsOnlyEncoding(record.x, record.y)];
  }
  return record.inputs.slice(0, m);
}

export function writeJsonl(path: string, objects: object[]): void {
  fs.writeFileSync(path, objects.map((o) => JSON.stringify(o)).join('\n') + '\n');
}
