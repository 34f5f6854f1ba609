import { CATEGORY_COLORS } from "./palette.js";
import { renderRose } from "./rose.js";
import type { ViewState } from "./state.js";
import type { SentencePayload } from "./types.js";

export interface InputViewCallbacks {
  onDraftChange(draft: string): void;
  onUpload(): void;
  onTopicChange(topic: string): void;
}

function labelChips(sentence: SentencePayload): HTMLSpanElement[] {
  const labels = sentence.component === "premise" ? sentence.strategies : [sentence.component];
  return labels
    .filter((label): label is keyof typeof CATEGORY_COLORS => label in CATEGORY_COLORS)
    .map((label) => {
      const chip = document.createElement("span");
      chip.className = `chip cat-${label}`;
      chip.style.backgroundColor = CATEGORY_COLORS[label];
      chip.textContent = label;
      return chip;
    });
}

export function renderInputView(container: HTMLElement, state: ViewState, callbacks: InputViewCallbacks): void {
  container.innerHTML = "";
  container.classList.toggle("stale", state.stale);

  const controls = document.createElement("div");
  controls.className = "controls";
  const select = document.createElement("select");
  select.id = "topic-select";
  for (const info of state.topics) {
    const option = document.createElement("option");
    option.value = info.topic;
    option.textContent = `${info.topic} (${info.example_count})`;
    option.selected = info.topic === state.topic;
    select.appendChild(option);
  }
  select.addEventListener("change", () => callbacks.onTopicChange(select.value));
  controls.appendChild(select);

  const upload = document.createElement("button");
  upload.id = "upload";
  upload.textContent = "Upload";
  upload.disabled = state.draft.trim() === "" || state.topic === null;
  upload.addEventListener("click", () => callbacks.onUpload());
  controls.appendChild(upload);
  container.appendChild(controls);

  const editor = document.createElement("textarea");
  editor.id = "draft";
  editor.value = state.draft;
  editor.rows = 8;
  editor.placeholder = "Write your argument here, then upload it for feedback.";
  editor.addEventListener("input", () => callbacks.onDraftChange(editor.value));
  container.appendChild(editor);

  if (state.stale) {
    const prompt = document.createElement("p");
    prompt.className = "stale-prompt";
    prompt.textContent = "Draft changed; upload again to refresh the feedback.";
    container.appendChild(prompt);
  }

  if (!state.analysis) return;

  const labeled = document.createElement("div");
  labeled.className = "labeled-sentences";
  for (const sentence of state.analysis.sentences) {
    const row = document.createElement("p");
    row.className = "labeled-sentence";
    row.dataset.index = String(sentence.index);
    for (const chip of labelChips(sentence)) row.appendChild(chip);
    const span = document.createElement("span");
    span.className = "sentence-text";
    span.textContent = sentence.text;
    row.appendChild(span);
    labeled.appendChild(row);
  }
  container.appendChild(labeled);

  const roseWrap = document.createElement("div");
  roseWrap.className = "portfolio-rose";
  roseWrap.appendChild(renderRose(state.analysis.portfolio, 140));
  container.appendChild(roseWrap);

  if (state.analysis.diagnostics.length > 0) {
    const list = document.createElement("ul");
    list.className = "diagnostics";
    for (const diag of state.analysis.diagnostics) {
      const item = document.createElement("li");
      item.className = `diag-${diag.kind}`;
      item.textContent = diag.message;
      list.appendChild(item);
    }
    container.appendChild(list);
  }
}
