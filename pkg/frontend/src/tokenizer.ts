/** Whitespace tokenizer with a fixed word vocabulary. */

export const PAD = 0;
export const BOS = 1;
export const EOS = 2;
export const UNK = 3;
const SPECIALS = ['<pad>', '<s>', '</s>', '<unk>'];

export class Tokenizer {
  readonly words: string[];
  private readonly ids: Map<string, number>;

  constructor(words: string[]) {
    this.words = [...SPECIALS, ...words];
    this.ids = new Map(this.words.map((w, i) => [w, i]));
  }

  static fromTexts(texts: string[]): Tokenizer {
    const seen = new Set<string>();
    for (const text of texts) {
      for (const word of text.split(/\s+/)) {
        if (word) seen.add(word);
      }
    }
    return new Tokenizer([...seen].sort());
  }

  get size(): number {
    return this.words.length;
  }

  encode(text: string, maxLen?: number): number[] {
    const ids = text
      .split(/\s+/)
      .filter(Boolean)
      .map((w) => this.ids.get(w) ?? UNK);
    return maxLen !== undefined ? ids.slice(0, maxLen) : ids;
  }

  decode(ids: number[]): string {
    return ids
      .filter((id) => id >= UNK)
      .map((id) => this.words[id] ?? '<unk>')
      .join(' ');
  }
}
