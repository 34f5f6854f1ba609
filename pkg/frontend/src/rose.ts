import { CATEGORY_COLORS, CATEGORY_ORDER, ROSE_BACKGROUND } from "./palette.js";
import type { Category, PortfolioPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SECTOR_ANGLE = (2 * Math.PI) / CATEGORY_ORDER.length;

export interface Sector {
  category: Category;
  radius: number;
  area: number;
  path: string;
  color: string;
}

function sectorPath(cx: number, cy: number, radius: number, start: number, end: number): string {
  const x1 = cx + radius * Math.cos(start);
  const y1 = cy + radius * Math.sin(start);
  const x2 = cx + radius * Math.cos(end);
  const y2 = cy + radius * Math.sin(end);
  return `M ${cx} ${cy} L ${x1} ${y1} A ${radius} ${radius} 0 0 1 ${x2} ${y2} Z`;
}

/**
 * Sector geometry for a portfolio rose: five fixed equal angles, radius
 * chosen so each sector's area is proportional to its category weight. The
 * full-radius background disc stands for the total sentence count.
 */
export function roseSectors(portfolio: PortfolioPayload, maxRadius: number, cx = 0, cy = 0): Sector[] {
  const total = portfolio.total_sentences;
  return CATEGORY_ORDER.map((category, i) => {
    const weight = portfolio.weights[category] ?? 0;
    const fraction = total > 0 ? weight / total : 0;
    const radius = maxRadius * Math.sqrt(fraction);
    const start = -Math.PI / 2 + i * SECTOR_ANGLE;
    return {
      category,
      radius,
      area: (SECTOR_ANGLE / 2) * radius * radius,
      path: sectorPath(cx, cy, radius, start, start + SECTOR_ANGLE),
      color: CATEGORY_COLORS[category],
    };
  });
}

export function renderRose(portfolio: PortfolioPayload, size: number): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));
  svg.setAttribute("viewBox", `${-size / 2} ${-size / 2} ${size} ${size}`);
  svg.classList.add("rose");
  const maxRadius = size / 2 - 2;

  const background = document.createElementNS(SVG_NS, "circle");
  background.setAttribute("r", String(maxRadius));
  background.setAttribute("fill", ROSE_BACKGROUND);
  background.classList.add("rose-bg");
  svg.appendChild(background);

  for (const sector of roseSectors(portfolio, maxRadius)) {
    if (sector.radius <= 0) continue;
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", sector.path);
    path.setAttribute("fill", sector.color);
    path.classList.add("rose-sector", `cat-${sector.category}`);
    path.dataset.category = sector.category;
    path.dataset.area = sector.area.toFixed(4);
    svg.appendChild(path);
  }
  return svg;
}
