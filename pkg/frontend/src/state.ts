import type { AnnotationResponse } from "./types.js";

// All UI state lives here as plain data with pure transitions, so the
// awkward cases (a response landing after a newer submit, a failure
// that must not wipe the last good render, a model toggle while a
// request is in flight) are testable without a DOM.

export interface RenderedResult {
  submittedText: string;
  response: AnnotationResponse;
}

export interface ViewState {
  input: string;
  models: readonly string[];
  selectedModel: string;
  inFlight: boolean;
  seq: number;
  result: RenderedResult | null;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    input: "",
    models: [],
    selectedModel: "",
    inFlight: false,
    seq: 0,
    result: null,
    error: null,
  };
}

export function modelsLoaded(state: ViewState, models: readonly string[]): ViewState {
  const selectedModel = models.includes(state.selectedModel)
    ? state.selectedModel
    : (models[0] ?? "");
  return { ...state, models: [...models], selectedModel };
}

export function inputChanged(state: ViewState, input: string): ViewState {
  return { ...state, input };
}

export function modelToggled(state: ViewState, id: string): ViewState {
  if (!state.models.includes(id)) return state; // unknown ids are never offered
  return { ...state, selectedModel: id }; // current render untouched
}

// Each submit claims a new sequence number; only the newest request
// may change the view when it settles.

export function submitStarted(state: ViewState): ViewState {
  return { ...state, inFlight: true, seq: state.seq + 1, error: null };
}

export function responseArrived(
  state: ViewState,
  seq: number,
  submittedText: string,
  response: AnnotationResponse,
): ViewState {
  if (seq !== state.seq) return state; // superseded, discard
  return {
    ...state,
    inFlight: false,
    error: null,
    result: { submittedText, response },
  };
}

export function requestFailed(state: ViewState, seq: number, message: string): ViewState {
  if (seq !== state.seq) return state; // superseded, discard
  return { ...state, inFlight: false, error: message }; // last render preserved
}

export function bootFailed(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}
