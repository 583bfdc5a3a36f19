// Deterministic lexical provider: hashed word n-gram embeddings plus an
// overlap/negation stance heuristic. No model downloads, bit-stable output,
// so the service always has a working default; transformer quality is an
// opt-in upgrade via the transformers provider.

import type { Provider, ProviderInfo, StanceJudgment, StanceLabel } from './provider.js';

export const LEXICAL_DIM = 384;
export const LEXICAL_BACKEND_ID = 'lexical-hash384-v1';

const NEGATION_MARKERS = new Set(['not', 'no', 'never', 'fake', 'false']);
const UNRELATED_FLOOR = 0.12;
const AGREE_FLOOR = 0.5;

function tokens(text: string): string[] {
  return text.toLowerCase().match(/[a-z0-9']+/g) ?? [];
}

// FNV-1a over UTF-8 code points; stable across platforms.
function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function embed(sentence: string): number[] {
  const words = tokens(sentence);
  if (words.length === 0) {
    throw new Error('cannot encode an empty sentence');
  }
  const vec = new Array<number>(LEXICAL_DIM).fill(0);
  for (const word of words) {
    vec[fnv1a(word) % LEXICAL_DIM] += 1.0;
  }
  for (let i = 0; i + 1 < words.length; i++) {
    vec[fnv1a(words[i] + ' ' + words[i + 1]) % LEXICAL_DIM] += 0.5;
  }
  let norm = 0;
  for (const x of vec) norm += x * x;
  norm = Math.sqrt(norm);
  return vec.map((x) => x / norm);
}

function negationParity(words: string[]): number {
  let count = 0;
  for (const w of words) {
    if (NEGATION_MARKERS.has(w) || w.endsWith("n't")) count += 1;
  }
  return count % 2;
}

export function judgeStance(source: string, target: string): StanceJudgment {
  const src = tokens(source);
  const tgt = tokens(target);
  if (src.length === 0 || tgt.length === 0) {
    throw new Error('cannot judge stance of empty text');
  }
  const srcSet = new Set(src);
  const tgtSet = new Set(tgt);
  let common = 0;
  for (const w of srcSet) if (tgtSet.has(w)) common += 1;
  const union = srcSet.size + tgtSet.size - common;
  const overlap = union === 0 ? 0 : common / union;

  let label: StanceLabel;
  let score: number;
  if (overlap < UNRELATED_FLOOR) {
    label = 'unrelated';
    score = Math.min(1, 1 - overlap);
  } else if (negationParity(src) !== negationParity(tgt)) {
    label = 'disagree';
    score = 0.8;
  } else if (overlap >= AGREE_FLOOR) {
    label = 'agree';
    score = Math.min(1, overlap);
  } else {
    label = 'discuss';
    score = 0.6;
  }
  return { label, score: Math.round(score * 1e6) / 1e6 };
}

export class LexicalProvider implements Provider {
  info(): ProviderInfo {
    return {
      backend_id: LEXICAL_BACKEND_ID,
      dim: LEXICAL_DIM,
      models: {
        encoder: 'hashed word uni+bigrams, fnv1a, 384 buckets',
        stance: 'token overlap + negation parity heuristic',
      },
    };
  }

  async encode(sentences: string[]): Promise<number[][]> {
    return sentences.map(embed);
  }

  async stance(pairs: Array<{ source: string; target: string }>): Promise<StanceJudgment[]> {
    return pairs.map((p) => judgeStance(p.source, p.target));
  }
}
