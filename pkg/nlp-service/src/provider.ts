// Provider abstraction: the server speaks one contract, models are swappable.

export type StanceLabel = 'agree' | 'disagree' | 'discuss' | 'unrelated';

export interface StanceJudgment {
  label: StanceLabel;
  score: number;
}

export interface ProviderInfo {
  backend_id: string;
  dim: number;
  models: Record<string, string>;
}

export interface Provider {
  info(): ProviderInfo;
  encode(sentences: string[]): Promise<number[][]>;
  stance(pairs: Array<{ source: string; target: string }>): Promise<StanceJudgment[]>;
}

export const ENCODE_BATCH_LIMIT = 256;
export const STANCE_BATCH_LIMIT = 128;
