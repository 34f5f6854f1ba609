import { CATEGORY_COLORS } from "./palette.js";
import type { AnalysisResult, TreeNode } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_RADIUS = 14;

function nodeColor(node: TreeNode): string {
  if (node.component === "claim") return CATEGORY_COLORS.claim;
  if (node.component === "premise" && node.strategies.length > 0) {
    return CATEGORY_COLORS[node.strategies[0]];
  }
  return "#9aa0a6";
}

/** Claims on the top row, premises and non-arguments below, arrows premise -> claim. */
export function renderNodeView(container: HTMLElement, analysis: AnalysisResult | null, stale: boolean): void {
  container.innerHTML = "";
  container.classList.toggle("stale", stale);
  if (!analysis) return;

  const { nodes, edges } = analysis.tree;
  const claims = nodes.filter((n) => n.component === "claim");
  const others = nodes.filter((n) => n.component !== "claim");
  const width = Math.max(claims.length, others.length, 1) * 90 + 40;
  const height = 180;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.classList.add("node-view");

  const defs = document.createElementNS(SVG_NS, "defs");
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#555"></path></marker>';
  svg.appendChild(defs);

  const position = new Map<number, { x: number; y: number }>();
  claims.forEach((node, i) => position.set(node.index, { x: 60 + i * 90, y: 40 }));
  others.forEach((node, i) => position.set(node.index, { x: 60 + i * 90, y: 140 }));

  const textByIndex = new Map(analysis.sentences.map((s) => [s.index, s.text]));

  for (const edge of edges) {
    const from = position.get(edge.premise_index);
    const to = position.get(edge.claim_index);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y - NODE_RADIUS));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y + NODE_RADIUS));
    line.setAttribute("stroke", "#555");
    line.setAttribute("marker-end", "url(#arrow)");
    line.classList.add("support-edge");
    if (edge.fallback) {
      line.classList.add("fallback");
      line.setAttribute("stroke-dasharray", "4 3");
    }
    svg.appendChild(line);
  }

  for (const node of nodes) {
    const at = position.get(node.index);
    if (!at) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("tree-node", `node-${node.component}`);
    group.dataset.index = String(node.index);

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(at.x));
    circle.setAttribute("cy", String(at.y));
    circle.setAttribute("r", String(NODE_RADIUS));
    circle.setAttribute("fill", nodeColor(node));
    group.appendChild(circle);

    // Hover tooltip with the underlying sentence.
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = textByIndex.get(node.index) ?? "";
    group.appendChild(title);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(at.x));
    label.setAttribute("y", String(at.y + 4));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("fill", "#fff");
    label.textContent = String(node.index);
    group.appendChild(label);

    svg.appendChild(group);
  }
  container.appendChild(svg);
}
