// Annotation queue state machine: optimistic advance on every decision,
// rollback on API failure, undo, and refill that never overlaps an
// in-flight label POST (a label is fully accepted by the server before
// the next batch of suggestions is requested).

import { ApiClient, ApiError } from './api.js';
import type { LabelSource, SuggestionView } from './types.js';
import { keyOf } from './types.js';

export interface QueueListener {
  onChange(): void;
  onError(message: string | null): void;
}

interface UndoEntry {
  item: SuggestionView;
  // what the server held before our write, if it was a confirmed label
  previous: { label: number; source: LabelSource } | null;
}

export class AnnotationQueue {
  private items: SuggestionView[] = [];
  private undoStack: UndoEntry[] = [];
  private pendingPost: Promise<unknown> = Promise.resolve();
  private refilling = false;

  fingerprint: string | null = null;
  retraining = false;
  queueSizeOnServer = 0;
  labeledThisSession = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly listener: QueueListener,
    private readonly batchSize = 20,
  ) {}

  get current(): SuggestionView | null {
    return this.items.length ? this.items[0] : null;
  }

  get localSize(): number {
    return this.items.length;
  }

  snapshot(): readonly SuggestionView[] {
    return this.items;
  }

  /** Pull a fresh batch; waits for any in-flight label write first. */
  async refill(): Promise<void> {
    if (this.refilling) return;
    this.refilling = true;
    try {
      await this.pendingPost;
      const response = await this.api.suggestions(this.batchSize);
      this.fingerprint = response.model_fingerprint;
      this.retraining = response.retraining;
      this.queueSizeOnServer = response.queue_size;
      this.items = [...response.suggestions];
      this.listener.onError(null);
    } catch (err) {
      this.listener.onError(describe(err));
    } finally {
      this.refilling = false;
      this.listener.onChange();
    }
  }

  /** Label the current suggestion; advances optimistically, rolls back on
   * failure. Resolves true when the server accepted the write. */
  async label(value: 0 | 1, source: LabelSource = 'human'): Promise<boolean> {
    const item = this.items.shift();
    if (!item) return false;
    const entry: UndoEntry = {
      item,
      previous:
        item.current_label !== null && item.current_source !== null && item.current_source !== 'model'
          ? { label: item.current_label, source: item.current_source }
          : null,
    };
    this.listener.onChange(); // optimistic advance

    const post = this.api
      .postLabel({ minute_id: item.minute_id, order: item.order, label: value, source })
      .then((response) => {
        this.fingerprint = response.model_fingerprint;
        this.retraining = response.retraining;
        this.queueSizeOnServer = response.queue_size;
        this.undoStack.push(entry);
        this.labeledThisSession += 1;
        this.listener.onError(null);
        return true;
      })
      .catch((err) => {
        this.items.unshift(item); // rollback: nothing was lost silently
        this.listener.onError(describe(err));
        return false;
      });
    this.pendingPost = post;
    const accepted = await post;
    this.listener.onChange();
    if (accepted && this.items.length === 0) {
      await this.refill();
    }
    return accepted;
  }

  /** Put the current suggestion at the back without writing anything. */
  skip(): void {
    const item = this.items.shift();
    if (item) {
      this.items.push(item);
      this.listener.onChange();
    }
  }

  /** Bring the last labeled speech back for re-decision. If the server
   * already held a confirmed label before our write, restore it. */
  async undo(): Promise<boolean> {
    const entry = this.undoStack.pop();
    if (!entry) return false;
    if (entry.previous) {
      try {
        await this.api.postLabel({
          minute_id: entry.item.minute_id,
          order: entry.item.order,
          label: entry.previous.label,
          source: entry.previous.source,
        });
      } catch (err) {
        this.undoStack.push(entry);
        this.listener.onError(describe(err));
        return false;
      }
    }
    this.items.unshift(entry.item);
    this.labeledThisSession = Math.max(0, this.labeledThisSession - 1);
    this.listener.onChange();
    return true;
  }

  async retrain(): Promise<boolean> {
    if (this.retraining) return false;
    try {
      const response = await this.api.retrain();
      this.retraining = response.retraining || response.started;
      this.listener.onChange();
      return response.started;
    } catch (err) {
      this.listener.onError(describe(err));
      return false;
    }
  }

  /** Poll /api/status; when a retrain finishes, refresh the queue so the
   * ordering reflects the new model. */
  async pollStatus(): Promise<void> {
    try {
      const status = await this.api.status();
      const retrainJustFinished = this.retraining && !status.retraining;
      const fingerprintChanged =
        status.model_fingerprint !== null && status.model_fingerprint !== this.fingerprint;
      this.retraining = status.retraining;
      this.fingerprint = status.model_fingerprint;
      this.queueSizeOnServer = status.queue_size;
      if (retrainJustFinished || fingerprintChanged) {
        await this.refill();
      } else {
        this.listener.onChange();
      }
    } catch (err) {
      this.listener.onError(describe(err));
    }
  }
}

export function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status === 0
      ? `network error: ${err.message} (is the server running?)`
      : `${err.kind}: ${err.message}`;
  }
  return String(err);
}

export function suggestionKey(s: SuggestionView): string {
  return keyOf(s.minute_id, s.order);
}
