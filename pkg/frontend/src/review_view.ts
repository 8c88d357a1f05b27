// Partition review screen: the block timeline of one minute, with every
// boundary speech highlighted alongside its model probability. Accepting
// a boundary writes a reviewed label 1; flagging it as wrong writes a
// reviewed label 0 - both through the same label API as annotation, so
// every review lands in the audit log.

import { ApiClient } from './api.js';
import { describe } from './queue.js';
import type { PartitionsResponse, PartitionView, SpeechRow } from './types.js';

export interface BoundaryRow {
  index: number; // speech index within the agenda item
  order: number;
  probability: number | null;
  blockLength: number;
}

/** Interior boundaries of a partition (block starts after the first),
 * joined with the decision probabilities. */
export function boundaries(partition: PartitionView): BoundaryRow[] {
  const byIndex = new Map(partition.decisions.map((d) => [d.index, d]));
  return partition.blocks
    .filter(([start]) => start > 0)
    .map(([start, end]) => ({
      index: start,
      order: byIndex.get(start)?.order ?? start,
      probability: byIndex.get(start)?.probability ?? null,
      blockLength: end - start + 1,
    }));
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class ReviewView {
  readonly root: HTMLElement;
  private input: HTMLInputElement;
  private timeline: HTMLElement;
  private message: HTMLElement;
  private onError: (message: string | null) => void;

  constructor(private readonly api: ApiClient, onError: (m: string | null) => void) {
    this.onError = onError;
    this.root = el('section', 'review');
    const form = el('form', 'minute-picker');
    this.input = el('input') as HTMLInputElement;
    this.input.placeholder = 'minute id, e.g. m000';
    const go = el('button', '', 'load partitions') as HTMLButtonElement;
    go.type = 'submit';
    form.append(this.input, go);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.load(this.input.value.trim());
    });
    this.message = el('p', 'empty');
    this.timeline = el('div', 'timeline');
    this.root.append(form, this.message, this.timeline);
  }

  async load(minuteId: string): Promise<void> {
    if (!minuteId) return;
    this.timeline.replaceChildren();
    this.message.textContent = 'loading...';
    let response: PartitionsResponse;
    try {
      response = await this.api.partitions(minuteId);
    } catch (err) {
      this.message.textContent = '';
      this.onError(describe(err));
      return;
    }
    this.onError(null);
    const labels = Object.keys(response.partitions);
    if (labels.length === 0) {
      this.message.textContent = `no partitions for ${minuteId}`;
      return;
    }
    this.message.textContent = '';
    for (const label of labels) {
      this.timeline.append(
        this.renderPartition(response.partitions[label], response.speeches[label] ?? []),
      );
    }
  }

  private renderPartition(partition: PartitionView, speeches: SpeechRow[]): HTMLElement {
    const wrap = el('div', 'partition');
    wrap.append(
      el('h3', '', `${partition.minute_id} / ${partition.agenda_item} - ` +
        `${partition.blocks.length} blocks, model ${partition.classifier_fingerprint}`),
    );
    if (partition.blocks.length === 0) {
      wrap.append(el('p', 'empty', 'this agenda item is empty'));
      return wrap;
    }
    const rows = boundaries(partition);
    partition.blocks.forEach(([start, end], blockNo) => {
      const block = el('div', 'block');
      block.append(el('div', 'block-head', `block ${blockNo + 1}: speeches ${start}..${end}`));
      const opener = speeches[start];
      if (opener) {
        block.append(el('p', 'opener', `${opener.debater}: ${opener.text}`));
      }
      if (start > 0) {
        const row = rows.find((r) => r.index === start);
        const controls = el('div', 'boundary');
        controls.append(
          el('span', 'boundary-label',
            `boundary at ${start}` +
            (row?.probability != null ? ` (p=${row.probability.toFixed(3)})` : '')),
        );
        const accept = el('button', 'accept', 'accept boundary') as HTMLButtonElement;
        const flag = el('button', 'flag', 'flag as wrong') as HTMLButtonElement;
        const order = row?.order ?? (opener ? opener.order : start);
        accept.addEventListener('click', () =>
          void this.writeReview(partition.minute_id, order, 1, controls));
        flag.addEventListener('click', () =>
          void this.writeReview(partition.minute_id, order, 0, controls));
        controls.append(accept, flag);
        block.prepend(controls);
      }
      wrap.append(block);
    });
    return wrap;
  }

  private async writeReview(
    minuteId: string,
    order: number,
    label: number,
    controls: HTMLElement,
  ): Promise<void> {
    try {
      await this.api.postLabel({ minute_id: minuteId, order, label, source: 'reviewed' });
      controls.append(el('span', 'reviewed-mark', ` -> reviewed as ${label}`));
      this.onError(null);
    } catch (err) {
      this.onError(describe(err));
    }
  }
}
