// Payload shapes mirroring the analysis service JSON. The UI never derives
// labels, portfolios, differences, or projections itself; it renders these.

export type Category = "claim" | "logos" | "pathos" | "ethos" | "evidence";

export type Ratios = Record<Category, number>;

export interface TopicInfo {
  topic: string;
  example_count: number;
}

export interface SentencePayload {
  index: number;
  start: number;
  end: number;
  text: string;
  component: "claim" | "premise" | "non_argument";
  strategies: Exclude<Category, "claim">[];
}

export interface PortfolioPayload {
  weights: Ratios;
  total_sentences: number;
}

export interface TreeEdge {
  premise_index: number;
  claim_index: number;
  fallback: boolean;
}

export interface TreeNode {
  index: number;
  component: SentencePayload["component"];
  strategies: Exclude<Category, "claim">[];
}

export interface Diagnostic {
  span: [number, number];
  kind: string;
  message: string;
}

export interface AnalysisResult {
  topic: string;
  sentences: SentencePayload[];
  tree: { nodes: TreeNode[]; edges: TreeEdge[] };
  portfolio: PortfolioPayload;
  ratios: Ratios;
  mds: { x: number; y: number } | null;
  diagnostics: Diagnostic[];
  used_default_claim: boolean;
  fallback_edges: number;
}

export interface ExamplePayload {
  post_id: string;
  delta: number;
  body: string;
  sentences: SentencePayload[];
  portfolio: PortfolioPayload;
  ratios: Ratios;
  mds: { x: number; y: number };
}

export interface TopicExamples {
  topic: string;
  average_ratios: Ratios;
  examples: ExamplePayload[];
}

export interface DifferenceBar {
  category: Category;
  value: number;
  deficient: boolean;
}

export interface CompareResult {
  topic: string;
  reference: string;
  bars: DifferenceBar[];
}
