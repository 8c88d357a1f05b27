// Annotation screen: one suggestion at a time with its context, decided
// from the keyboard (1 = interruption, 0 = continuation, s = skip,
// u = undo). All text is set via textContent - what the model saw is
// exactly what the human sees, untruncated.

import { AnnotationQueue } from './queue.js';
import type { SuggestionView } from './types.js';

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

export class AnnotationView {
  readonly root: HTMLElement;
  private card: HTMLElement;
  private meta: HTMLElement;
  private retrainButton: HTMLButtonElement;

  constructor(private readonly queue: AnnotationQueue) {
    this.root = el('section', 'annotation');
    this.meta = el('div', 'queue-meta');
    this.card = el('div', 'card');

    const help = el('div', 'keys');
    for (const [key, what] of [
      ['1', 'interruption'],
      ['0', 'continuation'],
      ['s', 'skip'],
      ['u', 'undo'],
    ]) {
      const span = el('span', 'key-hint');
      span.append(el('kbd', '', key), ` ${what} `);
      help.append(span);
    }

    this.retrainButton = el('button', 'retrain') as HTMLButtonElement;
    this.retrainButton.textContent = 'retrain model';
    this.retrainButton.addEventListener('click', () => void this.queue.retrain());

    const bar = el('div', 'toolbar');
    bar.append(help, this.retrainButton);
    this.root.append(this.meta, this.card, bar);
  }

  handleKey(key: string): boolean {
    if (key === '1' || key === '0') {
      void this.queue.label(key === '1' ? 1 : 0);
      return true;
    }
    if (key === 's') {
      this.queue.skip();
      return true;
    }
    if (key === 'u') {
      void this.queue.undo();
      return true;
    }
    return false;
  }

  render(): void {
    const q = this.queue;
    this.meta.textContent =
      `queue: ${q.queueSizeOnServer} unconfirmed on server | ` +
      `${q.labeledThisSession} labeled this session | ` +
      `model: ${q.fingerprint ?? 'none yet'}${q.retraining ? ' (retraining...)' : ''}`;
    this.retrainButton.disabled = q.retraining;
    this.retrainButton.textContent = q.retraining ? 'retraining...' : 'retrain model';
    this.card.replaceChildren();
    const current = q.current;
    if (!current) {
      this.card.append(
        el('p', 'empty', q.retraining
          ? 'Waiting for the retrained model...'
          : 'Queue empty - every moderator speech is confirmed. Retrain or review partitions.'),
      );
      return;
    }
    this.card.append(this.renderSuggestion(current));
  }

  private renderSuggestion(s: SuggestionView): HTMLElement {
    const wrap = el('div', 'suggestion');
    if (s.previous_text !== null) {
      wrap.append(el('blockquote', 'context prev', s.previous_text));
    }
    const main = el('div', 'speech');
    main.append(el('p', 'speech-text', s.text));
    const gauge = el('div', 'gauge');
    const fill = el('div', 'gauge-fill');
    fill.style.width = `${Math.round(s.probability * 100)}%`;
    gauge.append(fill);
    main.append(
      gauge,
      el(
        'p',
        'prob',
        `model: p(interruption) = ${s.probability.toFixed(3)}, ` +
          `uncertainty ${s.uncertainty.toFixed(3)}` +
          (s.current_label !== null
            ? ` | current label ${s.current_label} (${s.current_source})`
            : ' | unlabeled'),
      ),
    );
    wrap.append(main);
    if (s.next_text !== null) {
      wrap.append(el('blockquote', 'context next', s.next_text));
    }
    return wrap;
  }
}
