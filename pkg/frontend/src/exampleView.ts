import { CATEGORY_COLORS, CATEGORY_ORDER } from "./palette.js";
import { sentenceMatchesFilters } from "./state.js";
import type { ViewState } from "./state.js";
import type { Category } from "./types.js";

export interface ExampleViewCallbacks {
  onToggleFilter(category: Category): void;
}

/**
 * Delta-ranked example list (server order) with strategy-filter highlighting.
 * Filtering only adds/removes classes: matching sentences gain ``hl`` and the
 * rest are de-emphasized with ``dim`` but stay readable.
 */
export function renderExampleView(container: HTMLElement, state: ViewState, callbacks: ExampleViewCallbacks): void {
  container.innerHTML = "";

  const filters = document.createElement("div");
  filters.className = "filter-bar";
  for (const category of CATEGORY_ORDER) {
    const button = document.createElement("button");
    button.className = "filter-toggle";
    button.dataset.category = category;
    button.style.borderColor = CATEGORY_COLORS[category];
    button.classList.toggle("active", state.filters.has(category));
    button.textContent = category;
    button.addEventListener("click", () => callbacks.onToggleFilter(category));
    filters.appendChild(button);
  }
  container.appendChild(filters);

  if (!state.examples) return;
  const list = document.createElement("div");
  list.className = "example-list";
  for (const example of state.examples.examples) {
    const card = document.createElement("article");
    card.className = "example-card";
    card.id = `example-${example.post_id}`;
    card.classList.toggle("selected", example.post_id === state.selectedExample);

    const header = document.createElement("header");
    header.innerHTML = `<span class="delta">+${example.delta}&Delta;</span> <span class="post-id">${example.post_id}</span>`;
    card.appendChild(header);

    const body = document.createElement("p");
    body.className = "example-body";
    for (const sentence of example.sentences) {
      const span = document.createElement("span");
      span.className = "sentence";
      span.dataset.index = String(sentence.index);
      span.dataset.component = sentence.component;
      span.dataset.strategies = sentence.strategies.join(" ");
      if (state.filters.size > 0) {
        const matches = sentenceMatchesFilters(sentence.component, sentence.strategies, state.filters);
        span.classList.toggle("hl", matches);
        span.classList.toggle("dim", !matches);
      }
      span.textContent = sentence.text + " ";
      body.appendChild(span);
    }
    card.appendChild(body);
    list.appendChild(card);
  }
  container.appendChild(list);
}

export function scrollExampleIntoView(container: HTMLElement, postId: string): void {
  const id = `example-${postId}`.replace(/[\\"]/g, "\\$&");
  const card = container.querySelector<HTMLElement>(`[id="${id}"]`);
  card?.scrollIntoView({ behavior: "smooth", block: "nearest" });
}
