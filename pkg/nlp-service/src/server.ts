// HTTP backend contract:
//   POST /encode {"sentences": [...]}            -> {"dim": d, "vectors": [[...]]}
//   POST /stance {"pairs": [{"source","target"}]} -> {"judgments": [{"label","score"}]}
//   GET  /info                                   -> {"backend_id", "dim", "models"}
// Batch limits: 256 sentences, 128 pairs; empty batches are 400, oversize 413.

import http from 'node:http';

import { LexicalProvider } from './lexical.js';
import { ENCODE_BATCH_LIMIT, STANCE_BATCH_LIMIT, type Provider } from './provider.js';
import { TransformerProvider } from './transformer.js';

const MAX_BODY_BYTES = 4 * 1024 * 1024;

class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

function readBody(req: http.IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    let size = 0;
    req.on('data', (chunk: Buffer) => {
      size += chunk.length;
      if (size > MAX_BODY_BYTES) {
        reject(new HttpError(413, `request body exceeds ${MAX_BODY_BYTES} bytes`));
        req.destroy();
        return;
      }
      chunks.push(chunk);
    });
    req.on('end', () => resolve(Buffer.concat(chunks).toString('utf-8')));
    req.on('error', reject);
  });
}

function parseJson(body: string): any {
  try {
    return JSON.parse(body);
  } catch {
    throw new HttpError(400, 'request body is not valid JSON');
  }
}

function requireStrings(values: unknown, what: string): string[] {
  if (!Array.isArray(values)) throw new HttpError(400, `${what} must be an array`);
  for (const v of values) {
    if (typeof v !== 'string' || v.trim() === '') {
      throw new HttpError(400, `${what} entries must be non-empty strings`);
    }
  }
  return values as string[];
}

export async function handle(provider: Provider, req: http.IncomingMessage): Promise<{ status: number; payload: unknown }> {
  if (req.method === 'GET' && req.url === '/info') {
    return { status: 200, payload: provider.info() };
  }
  if (req.method === 'POST' && req.url === '/encode') {
    const body = parseJson(await readBody(req));
    const sentences = requireStrings(body?.sentences, 'sentences');
    if (sentences.length === 0) throw new HttpError(400, 'empty batch');
    if (sentences.length > ENCODE_BATCH_LIMIT) {
      throw new HttpError(413, `batch exceeds ${ENCODE_BATCH_LIMIT} sentences`);
    }
    const vectors = await provider.encode(sentences);
    return { status: 200, payload: { dim: provider.info().dim, vectors } };
  }
  if (req.method === 'POST' && req.url === '/stance') {
    const body = parseJson(await readBody(req));
    const pairs = body?.pairs;
    if (!Array.isArray(pairs)) throw new HttpError(400, 'pairs must be an array');
    if (pairs.length === 0) throw new HttpError(400, 'empty batch');
    if (pairs.length > STANCE_BATCH_LIMIT) {
      throw new HttpError(413, `batch exceeds ${STANCE_BATCH_LIMIT} pairs`);
    }
    for (const pair of pairs) {
      requireStrings([pair?.source, pair?.target], 'pair texts');
    }
    const judgments = await provider.stance(pairs);
    return { status: 200, payload: { judgments } };
  }
  throw new HttpError(404, `no such endpoint: ${req.method} ${req.url}`);
}

export function makeServer(provider: Provider): http.Server {
  return http.createServer(async (req, res) => {
    let status: number;
    let payload: unknown;
    try {
      ({ status, payload } = await handle(provider, req));
    } catch (err) {
      if (err instanceof HttpError) {
        status = err.status;
        payload = { error: err.message };
      } else {
        status = 500;
        payload = { error: String(err) };
      }
    }
    const body = JSON.stringify(payload);
    res.writeHead(status, { 'Content-Type': 'application/json; charset=utf-8' });
    res.end(body);
  });
}

export async function buildProvider(): Promise<Provider> {
  const kind = process.env.MODEL_PROVIDER ?? 'lexical';
  if (kind === 'transformers') {
    const provider = new TransformerProvider();
    await provider.load();
    return provider;
  }
  if (kind !== 'lexical') {
    throw new Error(`unknown MODEL_PROVIDER '${kind}' (expected 'lexical' or 'transformers')`);
  }
  return new LexicalProvider();
}

const isMain = process.argv[1]?.endsWith('server.js') ?? false;
if (isMain) {
  const port = Number(process.env.PORT ?? 8090);
  const host = process.env.HOST ?? '127.0.0.1';
  buildProvider()
    .then((provider) => {
      const server = makeServer(provider);
      server.listen(port, host, () => {
        const address = server.address();
        const actual = typeof address === 'object' && address ? address.port : port;
        console.log(`nlp-service listening on http://${host}:${actual} (${provider.info().backend_id})`);
      });
    })
    .catch((err) => {
      console.error(err);
      process.exit(1);
    });
}
