import { ApiClient } from "./api.js";
import { renderCompareView } from "./compareView.js";
import { renderExampleView, scrollExampleIntoView } from "./exampleView.js";
import { renderInputView } from "./inputView.js";
import { renderNodeView } from "./nodeView.js";
import { initialState } from "./state.js";
import type { ViewState } from "./state.js";
import type { Category } from "./types.js";

export interface AppContainers {
  input: HTMLElement;
  node: HTMLElement;
  examples: HTMLElement;
  compare: HTMLElement;
  status: HTMLElement;
}

export class App {
  readonly state: ViewState = initialState();
  private analyzeSeq = 0;
  /** Re-runs the last failed server call; rendered as an inline retry button. */
  private retryAction: (() => void) | null = null;

  constructor(
    private readonly containers: AppContainers,
    private readonly api: ApiClient,
  ) {}

  async init(): Promise<void> {
    this.state.topics = await this.api.getTopics();
    if (this.state.topics.length > 0) {
      await this.selectTopic(this.state.topics[0].topic);
    } else {
      this.render();
    }
  }

  async selectTopic(topic: string): Promise<void> {
    this.state.topic = topic;
    this.state.selectedExample = null;
    this.state.reference = "topic_average";
    this.state.comparison = null;
    try {
      this.state.examples = await this.api.getExamples(topic);
      this.state.error = null;
    } catch (err) {
      this.state.examples = null;
      this.state.error = String(err);
    }
    this.render();
  }

  setDraft(draft: string): void {
    this.state.draft = draft;
    if (this.state.analysis) {
      this.state.stale = true;
      // Staleness only dims views; no full re-render, so typing stays cheap.
      this.containers.input.classList.add("stale");
      this.containers.node.classList.add("stale");
      this.containers.compare.classList.add("stale");
    }
  }

  async analyze(): Promise<void> {
    if (!this.state.topic || this.state.draft.trim() === "") return;
    const seq = ++this.analyzeSeq;
    try {
      const analysis = await this.api.analyze(this.state.topic, this.state.draft);
      if (seq !== this.analyzeSeq) return; // superseded by a newer draft
      this.state.analysis = analysis;
      this.state.stale = false;
      this.state.error = null;
      this.retryAction = null;
      await this.refreshComparison();
    } catch (err) {
      if (seq !== this.analyzeSeq) return;
      this.state.error = String(err);
      this.retryAction = () => void this.analyze();
    }
    // One synchronous render per analysis: all four views swap atomically.
    this.render();
  }

  async refreshComparison(): Promise<void> {
    if (!this.state.analysis || !this.state.topic) return;
    this.state.comparison = await this.api.compare(
      this.state.analysis.ratios,
      this.state.reference,
      this.state.topic,
    );
  }

  async selectExample(postId: string): Promise<void> {
    this.state.selectedExample = postId;
    this.state.reference = postId;
    try {
      await this.refreshComparison();
      this.state.error = null;
      this.retryAction = null;
    } catch (err) {
      this.state.error = String(err);
      this.retryAction = () => void this.selectExample(postId);
    }
    this.render();
    scrollExampleIntoView(this.containers.examples, postId);
  }

  async selectTopicAverage(): Promise<void> {
    this.state.reference = "topic_average";
    this.state.selectedExample = null;
    try {
      await this.refreshComparison();
    } catch (err) {
      this.state.error = String(err);
    }
    this.render();
  }

  toggleFilter(category: Category): void {
    if (this.state.filters.has(category)) {
      this.state.filters.delete(category);
    } else {
      this.state.filters.add(category);
    }
    this.render();
  }

  render(): void {
    this.containers.status.textContent = this.state.error ?? "";
    this.containers.status.classList.toggle("visible", this.state.error !== null);
    if (this.state.error !== null && this.retryAction !== null) {
      const retry = document.createElement("button");
      retry.id = "retry";
      retry.textContent = "Retry";
      const action = this.retryAction;
      retry.addEventListener("click", () => action());
      this.containers.status.appendChild(retry);
    }
    renderInputView(this.containers.input, this.state, {
      onDraftChange: (draft) => this.setDraft(draft),
      onUpload: () => void this.analyze(),
      onTopicChange: (topic) => void this.selectTopic(topic),
    });
    renderNodeView(this.containers.node, this.state.analysis, this.state.stale);
    renderExampleView(this.containers.examples, this.state, {
      onToggleFilter: (category) => this.toggleFilter(category),
    });
    renderCompareView(this.containers.compare, this.state, {
      onSelectExample: (postId) => void this.selectExample(postId),
      onSelectTopicAverage: () => void this.selectTopicAverage(),
    });
  }
}

export function mount(root: Document = document): App {
  const containers: AppContainers = {
    input: root.getElementById("input-view")!,
    node: root.getElementById("node-view")!,
    examples: root.getElementById("example-view")!,
    compare: root.getElementById("compare-view")!,
    status: root.getElementById("status")!,
  };
  const app = new App(containers, new ApiClient(""));
  void app.init();
  return app;
}

declare global {
  interface Window {
    __PERSUA_NO_AUTOMOUNT__?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__PERSUA_NO_AUTOMOUNT__) {
  window.addEventListener("DOMContentLoaded", () => mount());
}
