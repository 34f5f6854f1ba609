import type { AnalysisResult, Category, CompareResult, TopicExamples } from "./types.js";

export interface ViewState {
  topics: { topic: string; example_count: number }[];
  topic: string | null;
  draft: string;
  analysis: AnalysisResult | null;
  /** Draft edited since the last analysis; views dim until re-upload. */
  stale: boolean;
  examples: TopicExamples | null;
  selectedExample: string | null;
  /** Highlight-only filters; they never change the underlying data. */
  filters: Set<Category>;
  reference: string;
  comparison: CompareResult | null;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    topics: [],
    topic: null,
    draft: "",
    analysis: null,
    stale: false,
    examples: null,
    selectedExample: null,
    filters: new Set(),
    reference: "topic_average",
    comparison: null,
    error: null,
  };
}

export function sentenceMatchesFilters(
  component: string,
  strategies: readonly string[],
  filters: ReadonlySet<Category>,
): boolean {
  if (filters.size === 0) return false;
  if (component === "claim" && filters.has("claim")) return true;
  return strategies.some((s) => filters.has(s as Category));
}
