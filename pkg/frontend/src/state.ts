// Pure view state and its transitions; the DOM layer renders from this.

import type { ClassifyResponse, Label, RecentRecord } from "./api";

export const MAX_RECENT = 5;

export interface LastResult {
  recordId: number;
  label: Label;
  confidence: number;
  reviewed: boolean;
}

export interface UiState {
  inFlight: boolean;
  lastResult: LastResult | null;
  recent: RecentRecord[];
  banner: string | null;
  validation: string | null;
}

export function initialState(): UiState {
  return { inFlight: false, lastResult: null, recent: [], banner: null, validation: null };
}

export function submitStarted(state: UiState): UiState {
  return { ...state, inFlight: true, banner: null, validation: null };
}

export function submitSucceeded(state: UiState, response: ClassifyResponse): UiState {
  return {
    ...state,
    inFlight: false,
    lastResult: {
      recordId: response.record_id,
      label: response.label,
      confidence: response.confidence,
      reviewed: false,
    },
    banner: null,
  };
}

export function requestFailed(state: UiState, code: string, message: string): UiState {
  return { ...state, inFlight: false, banner: `${code}: ${message}` };
}

export function validationFailed(state: UiState, message: string): UiState {
  return { ...state, validation: message };
}

export function feedbackApplied(state: UiState): UiState {
  if (!state.lastResult) return state;
  return { ...state, lastResult: { ...state.lastResult, reviewed: true }, banner: null };
}

export function recentLoaded(state: UiState, records: RecentRecord[]): UiState {
  return { ...state, recent: records.slice(0, MAX_RECENT) };
}

/** Confirm/correct are available only for an unreviewed result, when idle. */
export function canReview(state: UiState): boolean {
  return state.lastResult !== null && !state.lastResult.reviewed && !state.inFlight;
}

export function oppositeLabel(label: Label): Label {
  return label === "causal" ? "non-causal" : "causal";
}

export function formatConfidence(confidence: number): string {
  return `${(confidence * 100).toFixed(1)} %`;
}
