import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { MockServer, makeSpeeches } from './mock_server.js';

describe('ApiClient', () => {
  it('fetches status with meta fields', async () => {
    const server = new MockServer(makeSpeeches(5));
    const api = new ApiClient(server.fetch);
    const status = await api.status();
    expect(status.model_fingerprint).toBe('model-1');
    expect(status.retraining).toBe(false);
    expect(status.queue_size).toBe(5);
  });

  it('requests suggestions with the unlabeled status and limit', async () => {
    const server = new MockServer(makeSpeeches(30));
    const api = new ApiClient(server.fetch);
    const response = await api.suggestions(7);
    expect(response.suggestions).toHaveLength(7);
    expect(server.requests.at(-1)).toBe('GET /api/speeches');
    const sorted = [...response.suggestions].sort((a, b) => a.uncertainty - b.uncertainty);
    expect(response.suggestions).toEqual(sorted);
  });

  it('posts labels and surfaces conflicts as ApiError', async () => {
    const server = new MockServer(makeSpeeches(3));
    const api = new ApiClient(server.fetch);
    const first = server.queue()[0];
    const ok = await api.postLabel({
      minute_id: first.minute_id, order: first.order, label: 1, source: 'reviewed',
    });
    expect(ok.accepted).toBe(true);
    expect(ok.audit_log_size).toBe(1);
    await expect(
      api.postLabel({ minute_id: first.minute_id, order: first.order, label: 0, source: 'human' }),
    ).rejects.toMatchObject({ kind: 'DowngradeForbidden', status: 409 });
  });

  it('wraps network failures as status-0 ApiError', async () => {
    const api = new ApiClient(async () => {
      throw new TypeError('fetch failed');
    });
    await expect(api.status()).rejects.toBeInstanceOf(ApiError);
    await expect(api.status()).rejects.toMatchObject({ status: 0 });
  });

  it('sends the bearer token when configured', async () => {
    let seen: string | undefined;
    const server = new MockServer(makeSpeeches(1));
    const api = new ApiClient(async (input, init) => {
      seen = (init?.headers as Record<string, string>)?.Authorization;
      return server.fetch(input, init);
    }, '', 'tok');
    await api.status();
    expect(seen).toBe('Bearer tok');
  });

  it('exports the labels CSV verbatim', async () => {
    const server = new MockServer(makeSpeeches(2));
    const api = new ApiClient(server.fetch);
    const first = server.queue()[0];
    await api.postLabel({
      minute_id: first.minute_id, order: first.order, label: 1, source: 'human',
    });
    const csv = await api.exportLabelsCsv();
    expect(csv.split('\n')[0]).toBe('minute_id,order,label,source');
    expect(csv).toContain(`${first.minute_id},${first.order},1,human`);
  });
});
