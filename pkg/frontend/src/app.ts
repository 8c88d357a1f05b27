// Entry point: wires the API client, annotation queue and the two
// screens together. The UI keeps no state of its own beyond the session;
// a reload rebuilds everything from the server.

import { ApiClient } from './api.js';
import { AnnotationView } from './annotation_view.js';
import { AnnotationQueue } from './queue.js';
import { ReviewView } from './review_view.js';

const POLL_MS = 2500;

export function mount(root: HTMLElement, api = new ApiClient()): () => void {
  const errorBar = document.createElement('div');
  errorBar.className = 'error-bar hidden';
  const retryButton = document.createElement('button');
  retryButton.textContent = 'retry';
  const errorText = document.createElement('span');
  errorBar.append(errorText, retryButton);

  const setError = (message: string | null) => {
    if (message) {
      errorText.textContent = message + ' ';
      errorBar.classList.remove('hidden');
    } else {
      errorBar.classList.add('hidden');
    }
  };

  const queue = new AnnotationQueue(api, {
    onChange: () => annotation.render(),
    onError: setError,
  });
  const annotation = new AnnotationView(queue);
  const review = new ReviewView(api, setError);
  retryButton.addEventListener('click', () => void queue.refill());

  const tabs = document.createElement('nav');
  tabs.className = 'tabs';
  const annotateTab = document.createElement('button');
  annotateTab.textContent = 'annotate';
  const reviewTab = document.createElement('button');
  reviewTab.textContent = 'review partitions';
  tabs.append(annotateTab, reviewTab);

  let screen: 'annotate' | 'review' = 'annotate';
  const show = (next: 'annotate' | 'review') => {
    screen = next;
    annotation.root.classList.toggle('hidden', screen !== 'annotate');
    review.root.classList.toggle('hidden', screen !== 'review');
    annotateTab.classList.toggle('active', screen === 'annotate');
    reviewTab.classList.toggle('active', screen === 'review');
  };
  annotateTab.addEventListener('click', () => show('annotate'));
  reviewTab.addEventListener('click', () => show('review'));

  root.replaceChildren(tabs, errorBar, annotation.root, review.root);
  show('annotate');
  annotation.render();

  const keyHandler = (event: KeyboardEvent) => {
    if (screen !== 'annotate') return;
    if (event.target instanceof HTMLInputElement) return;
    if (annotation.handleKey(event.key)) event.preventDefault();
  };
  document.addEventListener('keydown', keyHandler);

  void queue.refill();
  const timer = setInterval(() => void queue.pollStatus(), POLL_MS);
  return () => {
    clearInterval(timer);
    document.removeEventListener('keydown', keyHandler);
  };
}

declare global {
  interface Window {
    debacerUnmount?: () => void;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  window.debacerUnmount = mount(document.getElementById('app') as HTMLElement);
}
