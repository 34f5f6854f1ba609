import type { Category } from "./types.js";

// Single shared palette: every view colors a category identically.
export const CATEGORY_ORDER: Category[] = ["claim", "logos", "pathos", "ethos", "evidence"];

export const CATEGORY_COLORS: Record<Category, string> = {
  claim: "#4c78a8",
  logos: "#59a14f",
  pathos: "#e15759",
  ethos: "#b07aa1",
  evidence: "#f28e2b",
};

// Difference bars: red marks strategies the writer underuses, blue overuse.
export const DEFICIT_COLOR = "#d62728";
export const SURPLUS_COLOR = "#1f77b4";

export const ROSE_BACKGROUND = "#dbe9f6";
