// Payload shapes of the annotation HTTP API, mirrored field for field.

export type LabelSource = 'human' | 'model' | 'reviewed';

export interface SuggestionView {
  minute_id: string;
  order: number;
  text: string;
  probability: number;
  uncertainty: number;
  previous_text: string | null;
  next_text: string | null;
  current_label: number | null;
  current_source: LabelSource | null;
}

export interface ApiMeta {
  model_fingerprint: string | null;
  retraining: boolean;
}

export interface SpeechesResponse extends ApiMeta {
  suggestions: SuggestionView[];
  queue_size: number;
}

export interface LabelResponse extends ApiMeta {
  accepted: boolean;
  queue_size: number;
  audit_log_size: number;
}

export interface RetrainResponse extends ApiMeta {
  started: boolean;
}

export interface StatusResponse extends ApiMeta {
  agenda_label: string;
  queue_size: number;
  labels: Record<LabelSource, number>;
  audit_log_size: number;
}

export interface ModeratorDecision {
  index: number;
  order: number;
  probability: number;
  is_interruption: boolean;
}

export interface PartitionView {
  minute_id: string;
  agenda_item: string;
  blocks: [number, number][];
  classifier_fingerprint: string;
  decisions: ModeratorDecision[];
}

export interface SpeechRow {
  order: number;
  debater: string;
  is_moderator: boolean;
  text: string;
}

export interface PartitionsResponse extends ApiMeta {
  minute_id: string;
  partitions: Record<string, PartitionView>;
  speeches: Record<string, SpeechRow[]>;
}

export interface LabelRequest {
  minute_id: string;
  order: number;
  label: number;
  source: LabelSource;
}

export type SpeechKey = string; // `${minute_id}:${order}`

export function keyOf(minuteId: string, order: number): SpeechKey {
  return `${minuteId}:${order}`;
}
