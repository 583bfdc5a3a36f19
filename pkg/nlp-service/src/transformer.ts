// Optional transformer provider backed by @huggingface/transformers (ONNX
// runtime). Loaded dynamically so the package works without the dependency
// or model downloads; select it with MODEL_PROVIDER=transformers. Stance is
// derived from an NLI cross-encoder: entailment maps to agree, contradiction
// to disagree, and neutral splits into discuss/unrelated by embedding
// similarity.

import type { Provider, ProviderInfo, StanceJudgment, StanceLabel } from './provider.js';

const ENCODER_MODEL = process.env.ENCODER_MODEL ?? 'Xenova/all-MiniLM-L6-v2';
const NLI_MODEL = process.env.NLI_MODEL ?? 'Xenova/nli-deberta-v3-small';
const NEUTRAL_SIMILARITY_FLOOR = 0.5;

type Pipeline = (...args: any[]) => Promise<any>;

export class TransformerProvider implements Provider {
  private encoder: Pipeline | null = null;
  private nli: Pipeline | null = null;
  private dim = 0;

  async load(): Promise<void> {
    const moduleName = '@huggingface/transformers';
    let transformers: any;
    try {
      transformers = await import(moduleName);
    } catch (err) {
      throw new Error(
        `transformers provider requires the optional '${moduleName}' package and ` +
        `downloadable model weights; install it or use MODEL_PROVIDER=lexical (${err})`,
      );
    }
    this.encoder = await transformers.pipeline('feature-extraction', ENCODER_MODEL);
    this.nli = await transformers.pipeline('text-classification', NLI_MODEL);
    const probe = await this.encodeRaw(['probe']);
    this.dim = probe[0].length;
  }

  info(): ProviderInfo {
    return {
      backend_id: `transformers-${ENCODER_MODEL.split('/').pop()}-v1`,
      dim: this.dim,
      models: { encoder: ENCODER_MODEL, stance: NLI_MODEL },
    };
  }

  private async encodeRaw(sentences: string[]): Promise<number[][]> {
    if (!this.encoder) throw new Error('provider not loaded');
    const output = await this.encoder(sentences, { pooling: 'mean', normalize: true });
    const [n, dim] = output.dims;
    const data: Float32Array = output.data;
    const vectors: number[][] = [];
    for (let i = 0; i < n; i++) {
      vectors.push(Array.from(data.slice(i * dim, (i + 1) * dim)));
    }
    return vectors;
  }

  async encode(sentences: string[]): Promise<number[][]> {
    return this.encodeRaw(sentences);
  }

  async stance(pairs: Array<{ source: string; target: string }>): Promise<StanceJudgment[]> {
    if (!this.nli) throw new Error('provider not loaded');
    const judgments: StanceJudgment[] = [];
    for (const pair of pairs) {
      const result = await this.nli(`${pair.source} </s></s> ${pair.target}`, { top_k: 1 });
      const top = Array.isArray(result) ? result[0] : result;
      const nliLabel = String(top.label).toLowerCase();
      let label: StanceLabel;
      if (nliLabel.includes('entail')) {
        label = 'agree';
      } else if (nliLabel.includes('contra')) {
        label = 'disagree';
      } else {
        const [a, b] = await this.encodeRaw([pair.source, pair.target]);
        let cos = 0;
        for (let i = 0; i < a.length; i++) cos += a[i] * b[i];
        label = (cos + 1) / 2 >= NEUTRAL_SIMILARITY_FLOOR ? 'discuss' : 'unrelated';
      }
      judgments.push({ label, score: Number(top.score) });
    }
    return judgments;
  }
}
