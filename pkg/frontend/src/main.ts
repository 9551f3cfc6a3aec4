import { annotate, fetchModels } from "./api.js";
import { toSegments } from "./segments.js";
import {
  bootFailed,
  initialState,
  inputChanged,
  modelsLoaded,
  modelToggled,
  requestFailed,
  responseArrived,
  submitStarted,
  type ViewState,
} from "./state.js";

// Thin DOM shell over the pure modules: read events, step the state,
// repaint. Server-provided text only ever lands in textContent, never
// in markup.

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const input = el<HTMLTextAreaElement>("input");
const modelBox = el<HTMLElement>("models");
const submit = el<HTMLButtonElement>("submit");
const banner = el<HTMLElement>("banner");
const resultBox = el<HTMLElement>("result");
const originalLine = el<HTMLElement>("original");
const annotatedLine = el<HTMLElement>("annotated");
const metaLine = el<HTMLElement>("meta");

let state: ViewState = initialState();

function step(next: ViewState): void {
  state = next;
  repaint();
}

function renderModels(): void {
  modelBox.textContent = "";
  for (const id of state.models) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "model";
    radio.value = id;
    radio.checked = id === state.selectedModel;
    radio.addEventListener("change", () => step(modelToggled(state, id)));
    label.append(radio, document.createTextNode(id));
    modelBox.append(label);
  }
}

function entityNode(segmentText: string, entity: { class: string; url: string; color: string }): HTMLElement {
  // No URL means nothing to open; render an inert span instead.
  const node = entity.url
    ? document.createElement("a")
    : document.createElement("span");
  if (node instanceof HTMLAnchorElement) {
    node.href = entity.url;
    node.target = "_blank";
    node.rel = "noopener noreferrer";
  }
  node.className = "entity";
  node.style.backgroundColor = entity.color;
  node.dataset["class"] = entity.class;
  node.title = entity.class;
  node.textContent = segmentText;
  return node;
}

function renderResult(): void {
  if (!state.result) {
    resultBox.hidden = true;
    return;
  }
  const { submittedText, response } = state.result;
  resultBox.hidden = false;
  originalLine.textContent = submittedText;

  annotatedLine.textContent = "";
  for (const segment of toSegments(response.normalized, response.entities)) {
    if (segment.entity) {
      annotatedLine.append(entityNode(segment.text, segment.entity));
    } else {
      annotatedLine.append(document.createTextNode(segment.text));
    }
  }
  metaLine.textContent = `${response.model} · ${response.ms.toFixed(1)} ms`;
}

function repaint(): void {
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? "";
  submit.disabled = state.inFlight || state.selectedModel === "";
  renderModels();
  renderResult();
}

function messageOf(error: unknown): string {
  if (error instanceof Error && error.message) return error.message;
  return "request failed";
}

async function runSubmit(): Promise<void> {
  const next = submitStarted(state);
  const seq = next.seq;
  const text = state.input;
  const model = state.selectedModel;
  step(next);
  try {
    const response = await annotate(text, model);
    step(responseArrived(state, seq, text, response));
  } catch (error) {
    step(requestFailed(state, seq, messageOf(error)));
  }
}

input.addEventListener("input", () => {
  state = inputChanged(state, input.value); // no repaint needed per keystroke
});
input.addEventListener("keydown", (event) => {
  if (event.key === "Enter" && (event.ctrlKey || event.metaKey) && !submit.disabled) {
    event.preventDefault();
    void runSubmit();
  }
});
submit.addEventListener("click", () => void runSubmit());

async function boot(): Promise<void> {
  try {
    step(modelsLoaded(state, await fetchModels()));
  } catch (error) {
    step(bootFailed(state,
      `could not load the model list (${messageOf(error)}); is the service running?`));
  }
}

void boot();
