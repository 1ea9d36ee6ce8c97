/**
 * Plain-string SVG assembly: scales, paths, axes, legends.
 *
 * Series groups carry data-series attributes so tests (and downstream
 * tooling) can count and identify them without an XML parser.
 */

import {
  FONT_FAMILY,
  FONT_SIZE,
  HEIGHT,
  MARGIN,
  TITLE_SIZE,
  WIDTH,
} from "./style";

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  return fn;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (v: number): string => (Math.round(v * 100) / 100).toString();

export function polylinePath(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? "M" : "L"}${fmt(xs[i])} ${fmt(ys[i])}`);
  }
  return parts.join(" ");
}

/** Closed band between an upper and a lower curve (same x grid). */
export function bandPath(xs: number[], upper: number[], lower: number[]): string {
  const forward = polylinePath(xs, upper);
  const back: string[] = [];
  for (let i = xs.length - 1; i >= 0; i--) {
    back.push(`L${fmt(xs[i])} ${fmt(lower[i])}`);
  }
  return `${forward} ${back.join(" ")} Z`;
}

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (hi <= lo) return [lo];
  const rawStep = (hi - lo) / count;
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * power).find((s) => s >= rawStep) ?? rawStep;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
    ticks.push(Math.round(v * 1e9) / 1e9);
  }
  return ticks;
}

export interface PlotFrame {
  x: Scale;
  y: Scale;
  body: string[];
}

export function makeFrame(xDomain: [number, number], yDomain: [number, number]): PlotFrame {
  return {
    x: linearScale(xDomain, [MARGIN.left, WIDTH - MARGIN.right]),
    y: linearScale(yDomain, [HEIGHT - MARGIN.bottom, MARGIN.top]),
    body: [],
  };
}

export function drawAxes(frame: PlotFrame, xLabel: string, yLabel: string): void {
  const { x, y, body } = frame;
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  body.push(`<g class="axes" stroke="#333" fill="none">`);
  body.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}"/>`);
  body.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}"/>`);
  body.push(`</g>`);
  body.push(`<g class="ticks" font-family="${FONT_FAMILY}" font-size="${FONT_SIZE}" fill="#333">`);
  for (const t of niceTicks(x.domain[0], x.domain[1])) {
    const px = x(t);
    body.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="#333"/>`);
    body.push(`<text x="${fmt(px)}" y="${y0 + 18}" text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of niceTicks(y.domain[0], y.domain[1])) {
    const py = y(t);
    body.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#333"/>`);
    body.push(`<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end">${fmt(t)}</text>`);
  }
  body.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 10}" text-anchor="middle">${escapeXml(xLabel)}</text>`);
  body.push(
    `<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 16 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
  );
  body.push(`</g>`);
}

export interface LegendEntry {
  label: string;
  color: string;
  width: number;
  dash?: string;
}

export function drawLegend(frame: PlotFrame, entries: LegendEntry[]): void {
  const x0 = MARGIN.left + 10;
  let yPos = MARGIN.top + 6;
  frame.body.push(`<g class="legend" font-family="${FONT_FAMILY}" font-size="${FONT_SIZE}">`);
  for (const e of entries) {
    const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    frame.body.push(
      `<line x1="${x0}" y1="${yPos}" x2="${x0 + 26}" y2="${yPos}" ` +
      `stroke="${e.color}" stroke-width="${e.width}"${dash}/>`,
    );
    frame.body.push(
      `<text x="${x0 + 32}" y="${yPos + 4}" fill="#222">${escapeXml(e.label)}</text>`,
    );
    yPos += 17;
  }
  frame.body.push(`</g>`);
}

export function drawTitle(frame: PlotFrame, title: string): void {
  frame.body.push(
    `<text x="${WIDTH / 2}" y="${MARGIN.top - 16}" text-anchor="middle" ` +
    `font-family="${FONT_FAMILY}" font-size="${TITLE_SIZE}" fill="#111">` +
    `${escapeXml(title)}</text>`,
  );
}

/** Small downward arrow with its tip at (x, y). */
export function arrowMarker(x: number, y: number, color: string, label: string): string {
  const tip = `M${fmt(x)} ${fmt(y)} l-5 -10 l10 0 Z`;
  return (
    `<g class="marker" data-marker="${escapeXml(label)}">` +
    `<line x1="${fmt(x)}" y1="${fmt(y - 22)}" x2="${fmt(x)}" y2="${fmt(y - 9)}" ` +
    `stroke="${color}" stroke-width="1.5"/>` +
    `<path d="${tip}" fill="${color}"/></g>`
  );
}

export function render(frame: PlotFrame): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
    frame.body.join("\n") +
    `\n</svg>\n`
  );
}
