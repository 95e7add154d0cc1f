/** Surface-overlap metrics: corpus BLEU (0-100) and mean ROUGE-L F1 (0-1). */

function tokenize(text: string): string[] {
  return text.split(/\s+/).filter(Boolean);
}

function ngramCounts(tokens: string[], n: number): Map<string, number> {
  const counts = new Map<string, number>();
  for (let i = 0; i + n <= tokens.length; i++) {
    const gram = tokens.slice(i, i + n).join(' ');
    counts.set(gram, (counts.get(gram) ?? 0) + 1);
  }
  return counts;
}

/** Corpus-level BLEU-4 with brevity penalty, scaled to 0-100. */
export function corpusBleu(candidates: string[], references: string[], maxN = 4): number {
  if (candidates.length !== references.length) {
    throw new Error(`${candidates.length} candidates vs ${references.length} references`);
  }
  const clipped = new Array(maxN).fill(0);
  const totals = new Array(maxN).fill(0);
  let candLength = 0;
  let refLength = 0;
  for (let i = 0; i < candidates.length; i++) {
    const cand = tokenize(candidates[i]);
    const ref = tokenize(references[i]);
    candLength += cand.length;
    refLength += ref.length;
    for (let n = 1; n <= maxN; n++) {
      const candGrams = ngramCounts(cand, n);
      const refGrams = ngramCounts(ref, n);
      for (const [gram, count] of candGrams) {
        clipped[n - 1] += Math.min(count, refGrams.get(gram) ?? 0);
        totals[n - 1] += count;
      }
    }
  }
  if (candLength === 0) return 0;
  let logSum = 0;
  let used = 0;
  for (let n = 0; n < maxN; n++) {
    if (totals[n] === 0) continue; // sentences shorter than n+1 tokens
    if (clipped[n] === 0) return 0;
    logSum += Math.log(clipped[n] / totals[n]);
    used++;
  }
  if (used === 0) return 0;
  const brevity = candLength >= refLength ? 1 : Math.exp(1 - refLength / candLength);
  return 100 * brevity * Math.exp(logSum / used);
}

function lcsLength(a: string[], b: string[]): number {
  const table = new Array(b.length + 1).fill(0);
  for (let i = 1; i <= a.length; i++) {
    let diagonal = 0;
    for (let j = 1; j <= b.length; j++) {
      const previous = table[j];
      table[j] = a[i - 1] === b[j - 1] ? diagonal + 1 : Math.max(table[j], table[j - 1]);
      diagonal = previous;
    }
  }
  return table[b.length];
}

/** ROUGE-L F1 of one candidate/reference pair. */
export function rougeL(candidate: string, reference: string): number {
  const cand = tokenize(candidate);
  const ref = tokenize(reference);
  if (cand.length === 0 || ref.length === 0) return 0;
  const lcs = lcsLength(cand, ref);
  if (lcs === 0) return 0;
  const precision = lcs / cand.length;
  const recall = lcs / ref.length;
  return (2 * precision * recall) / (precision + recall);
}

export interface MetricReport {
  bleu: number;
  rougeL: number;
  count: number;
}

export function evaluate(generations: string[], references: string[]): MetricReport {
  if (generations.length !== references.length) {
    throw new Error(`${generations.length} generations vs ${references.length} references`);
  }
  const meanRouge =
    generations.length === 0
      ? 0
      : generations.reduce((sum, g, i) => sum + rougeL(g, references[i]), 0) / generations.length;
  return {
    bleu: corpusBleu(generations, references),
    rougeL: meanRouge,
    count: generations.length,
  };
}
