import { DEFICIT_COLOR, SURPLUS_COLOR } from "./palette.js";
import { renderRose, roseSectors } from "./rose.js";
import type { ViewState } from "./state.js";
import type { ExamplePayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SCATTER_SIZE = 260;
const GLYPH_RADIUS = 16; // uniform: glyph size must not read as a quality cue

export interface CompareViewCallbacks {
  onSelectExample(postId: string): void;
  onSelectTopicAverage(): void;
}

function scatterPosition(examples: ExamplePayload[], size: number): Map<string, { x: number; y: number }> {
  const xs = examples.map((e) => e.mds.x);
  const ys = examples.map((e) => e.mds.y);
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  const scale = (size / 2 - GLYPH_RADIUS - 6) / (Math.max(spanX, spanY) / 2);
  const out = new Map<string, { x: number; y: number }>();
  const midX = (Math.max(...xs) + Math.min(...xs)) / 2;
  const midY = (Math.max(...ys) + Math.min(...ys)) / 2;
  for (const e of examples) {
    out.set(e.post_id, {
      x: size / 2 + (e.mds.x - midX) * scale,
      y: size / 2 + (e.mds.y - midY) * scale,
    });
  }
  return out;
}

function renderScatter(state: ViewState, callbacks: CompareViewCallbacks): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(SCATTER_SIZE));
  svg.setAttribute("height", String(SCATTER_SIZE));
  svg.classList.add("mds-scatter");
  const examples = state.examples?.examples ?? [];
  const positions = scatterPosition(examples, SCATTER_SIZE);
  for (const example of examples) {
    const at = positions.get(example.post_id)!;
    const glyph = document.createElementNS(SVG_NS, "g");
    glyph.classList.add("mds-glyph");
    glyph.dataset.postId = example.post_id;
    glyph.classList.toggle("selected", example.post_id === state.selectedExample);
    glyph.setAttribute("transform", `translate(${at.x} ${at.y})`);

    const halo = document.createElementNS(SVG_NS, "circle");
    halo.setAttribute("r", String(GLYPH_RADIUS));
    halo.classList.add("glyph-halo");
    glyph.appendChild(halo);
    for (const sector of roseSectors(example.portfolio, GLYPH_RADIUS)) {
      if (sector.radius <= 0) continue;
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", sector.path);
      path.setAttribute("fill", sector.color);
      glyph.appendChild(path);
    }
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${example.post_id} (+${example.delta})`;
    glyph.appendChild(title);
    glyph.addEventListener("click", () => callbacks.onSelectExample(example.post_id));
    svg.appendChild(glyph);
  }
  return svg;
}

function renderBars(state: ViewState): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "difference-bars";
  if (!state.comparison) return wrap;
  const maxAbs = Math.max(...state.comparison.bars.map((b) => Math.abs(b.value)), 1);
  // Bars arrive sorted most-deficient first and render top to bottom as-is.
  for (const bar of state.comparison.bars) {
    const row = document.createElement("div");
    row.className = "bar-row " + (bar.deficient ? "negative" : "positive");
    row.dataset.category = bar.category;
    row.dataset.value = String(bar.value);

    const label = document.createElement("span");
    label.className = "bar-label";
    label.textContent = bar.category;
    row.appendChild(label);

    const track = document.createElement("span");
    track.className = "bar-track";
    const fill = document.createElement("span");
    fill.className = "bar-fill";
    fill.style.width = `${(Math.abs(bar.value) / maxAbs) * 100}%`;
    fill.style.backgroundColor = bar.deficient ? DEFICIT_COLOR : SURPLUS_COLOR;
    track.appendChild(fill);
    row.appendChild(track);

    const value = document.createElement("span");
    value.className = "bar-value";
    value.textContent = bar.value.toFixed(1);
    row.appendChild(value);
    wrap.appendChild(row);
  }
  return wrap;
}

export function renderCompareView(container: HTMLElement, state: ViewState, callbacks: CompareViewCallbacks): void {
  container.innerHTML = "";
  container.classList.toggle("stale", state.stale);
  if (!state.examples) return;

  const average = document.createElement("div");
  average.className = "topic-average";
  const averageButton = document.createElement("button");
  averageButton.id = "reference-topic-average";
  averageButton.textContent = "Compare with topic average";
  averageButton.classList.toggle("active", state.reference === "topic_average");
  averageButton.addEventListener("click", () => callbacks.onSelectTopicAverage());
  average.appendChild(averageButton);
  // Topic-average rose: same encoding as the writer's own portfolio rose.
  average.appendChild(
    renderRose({ weights: state.examples.average_ratios, total_sentences: 1 }, 110),
  );
  container.appendChild(average);

  container.appendChild(renderScatter(state, callbacks));
  container.appendChild(renderBars(state));
}
