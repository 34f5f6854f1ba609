import type { AnalysisResult, CompareResult, ExamplePayload, TopicExamples, TopicInfo } from "../src/types.js";

export const TOPICS: TopicInfo[] = [{ topic: "parenthood", example_count: 2 }];

function example(postId: string, delta: number, mds: { x: number; y: number }): ExamplePayload {
  return {
    post_id: postId,
    delta,
    body: "Kids cost money. Surveys say parents sleep less. My cousin naps standing up.",
    sentences: [
      { index: 0, start: 0, end: 16, text: "Kids cost money.", component: "claim", strategies: [] },
      {
        index: 1,
        start: 17,
        end: 48,
        text: "Surveys say parents sleep less.",
        component: "premise",
        strategies: ["logos"],
      },
      {
        index: 2,
        start: 49,
        end: 77,
        text: "My cousin naps standing up.",
        component: "premise",
        strategies: ["evidence", "pathos"],
      },
    ],
    portfolio: {
      weights: { claim: 1, logos: 1, pathos: 0.5, ethos: 0, evidence: 0.5 },
      total_sentences: 3,
    },
    ratios: { claim: 1 / 3, logos: 1 / 3, pathos: 1 / 6, ethos: 0, evidence: 1 / 6 },
    mds,
  };
}

export const EXAMPLES: TopicExamples = {
  topic: "parenthood",
  average_ratios: { claim: 0.3, logos: 0.4, pathos: 0.1, ethos: 0.05, evidence: 0.15 },
  examples: [example("post-a", 9, { x: -0.2, y: 0.1 }), example("post-b", 4, { x: 0.25, y: -0.05 })],
};

export const ANALYSIS: AnalysisResult = {
  topic: "parenthood",
  sentences: [
    { index: 0, start: 0, end: 20, text: "Parenthood is hard.", component: "claim", strategies: [] },
    { index: 1, start: 21, end: 40, text: "It wears you down.", component: "premise", strategies: ["pathos"] },
  ],
  tree: {
    nodes: [
      { index: 0, component: "claim", strategies: [] },
      { index: 1, component: "premise", strategies: ["pathos"] },
    ],
    edges: [{ premise_index: 1, claim_index: 0, fallback: false }],
  },
  portfolio: { weights: { claim: 1, logos: 0, pathos: 1, ethos: 0, evidence: 0 }, total_sentences: 2 },
  ratios: { claim: 0.5, logos: 0, pathos: 0.5, ethos: 0, evidence: 0 },
  mds: { x: 0.05, y: 0.02 },
  diagnostics: [],
  used_default_claim: false,
  fallback_edges: 0,
};

export const COMPARISON: CompareResult = {
  topic: "parenthood",
  reference: "topic_average",
  bars: [
    { category: "logos", value: -40, deficient: true },
    { category: "evidence", value: -15, deficient: true },
    { category: "ethos", value: -5, deficient: true },
    { category: "claim", value: 20, deficient: false },
    { category: "pathos", value: 40, deficient: false },
  ],
};
