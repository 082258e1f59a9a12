/** Hand-rolled SVG charts: frequency line panels and grouped bars.
 *
 * Rendering is a pure function of the input — no clock, no randomness —
 * and a null frequency always produces a visible gap (a break in the
 * line, a missing bar), never a zero.
 */

export const NOTION_COLORS: Record<string, string> = {
  CW: "#1f77b4",
  UnanUD: "#ff7f0e",
  UnanDom: "#2ca02c",
  MajUD: "#d62728",
  MajDom: "#9467bd",
  PlurUD: "#8c564b",
  PlurDom: "#e377c2",
};

export const NOTION_ORDER = Object.keys(NOTION_COLORS);

function color(notion: string): string {
  return NOTION_COLORS[notion] ?? "#555555";
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const fmt = (value: number): string => String(Math.round(value * 100) / 100);

export interface Series {
  name: string;
  /** y = null renders as a gap */
  points: { x: number; y: number | null }[];
}

export interface Panel {
  title: string;
  series: Series[];
}

const PANEL_W = 360;
const PANEL_H = 260;
const MARGIN = { left: 44, right: 12, top: 28, bottom: 36 };

function xScale(xs: number[]): (x: number) => number {
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const span = hi > lo ? hi - lo : 1;
  return (x) =>
    MARGIN.left + ((x - lo) / span) * (PANEL_W - MARGIN.left - MARGIN.right);
}

function yScale(y: number): number {
  return MARGIN.top + (1 - y) * (PANEL_H - MARGIN.top - MARGIN.bottom);
}

function panelFrame(title: string, xs: number[], xLabel: string): string {
  const parts: string[] = [];
  const bottom = PANEL_H - MARGIN.bottom;
  parts.push(
    `<text x="${PANEL_W / 2}" y="16" text-anchor="middle" font-size="13" font-weight="bold">${esc(title)}</text>`,
  );
  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    const y = yScale(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${PANEL_W - MARGIN.right}" y2="${fmt(y)}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${fmt(y + 3)}" text-anchor="end" font-size="9">${tick}</text>`,
    );
  }
  const sx = xScale(xs);
  for (const x of xs) {
    parts.push(
      `<line x1="${fmt(sx(x))}" y1="${bottom}" x2="${fmt(sx(x))}" y2="${bottom + 4}" stroke="#333333"/>`,
      `<text x="${fmt(sx(x))}" y="${bottom + 14}" text-anchor="middle" font-size="9">${x}</text>`,
    );
  }
  parts.push(
    `<text x="${PANEL_W / 2}" y="${PANEL_H - 6}" text-anchor="middle" font-size="10">${esc(xLabel)}</text>`,
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PANEL_W - MARGIN.left - MARGIN.right}" height="${PANEL_H - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#333333"/>`,
  );
  return parts.join("\n");
}

/** Polyline segments between consecutive non-null points; gaps split runs. */
export function seriesSegments(series: Series): { x: number; y: number }[][] {
  const runs: { x: number; y: number }[][] = [];
  let current: { x: number; y: number }[] = [];
  for (const p of series.points) {
    if (p.y === null) {
      if (current.length > 0) runs.push(current);
      current = [];
    } else {
      current.push({ x: p.x, y: p.y });
    }
  }
  if (current.length > 0) runs.push(current);
  return runs;
}

function drawSeries(series: Series, xs: number[]): string {
  const sx = xScale(xs);
  const stroke = color(series.name);
  const parts: string[] = [];
  for (const run of seriesSegments(series)) {
    if (run.length > 1) {
      const points = run.map((p) => `${fmt(sx(p.x))},${fmt(yScale(p.y))}`).join(" ");
      parts.push(`<polyline points="${points}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`);
    }
    for (const p of run) {
      parts.push(`<circle cx="${fmt(sx(p.x))}" cy="${fmt(yScale(p.y))}" r="2.2" fill="${stroke}"/>`);
    }
  }
  return parts.join("\n");
}

function legend(names: string[], width: number): string {
  const parts: string[] = [`<g transform="translate(${width / 2 - names.length * 38},0)">`];
  names.forEach((name, i) => {
    const x = i * 76;
    parts.push(
      `<rect x="${x}" y="4" width="10" height="10" fill="${color(name)}"/>`,
      `<text x="${x + 14}" y="13" font-size="10">${esc(name)}</text>`,
    );
  });
  parts.push("</g>");
  return parts.join("\n");
}

function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
  ].join("\n");
}

export function linePanelFigure(panels: Panel[], xLabel: string): string {
  const cols = Math.min(2, panels.length);
  const rows = Math.ceil(panels.length / cols);
  const width = cols * PANEL_W;
  const height = rows * PANEL_H + 24;
  const names = NOTION_ORDER.filter((n) =>
    panels.some((panel) => panel.series.some((s) => s.name === n)),
  );
  const body: string[] = [legend(names, width)];
  panels.forEach((panel, i) => {
    const xs = [...new Set(panel.series.flatMap((s) => s.points.map((p) => p.x)))].sort(
      (a, b) => a - b,
    );
    const tx = (i % cols) * PANEL_W;
    const ty = Math.floor(i / cols) * PANEL_H + 24;
    body.push(`<g transform="translate(${tx},${ty})">`);
    body.push(panelFrame(panel.title, xs, xLabel));
    for (const series of panel.series) body.push(drawSeries(series, xs));
    body.push("</g>");
  });
  return svgDocument(width, height, body.join("\n"));
}

export interface BarGroup {
  label: string;
  /** null bar height renders as a missing bar */
  bars: { name: string; value: number | null }[];
}

export function groupedBarFigure(groups: BarGroup[], title: string): string {
  const groupWidth = Math.max(90, 14 * Math.max(...groups.map((g) => g.bars.length)) + 30);
  const width = Math.max(480, MARGIN.left + MARGIN.right + groups.length * groupWidth);
  const height = 320;
  const bottom = height - 48;
  const top = 44;
  const names = NOTION_ORDER.filter((n) => groups.some((g) => g.bars.some((b) => b.name === n)));
  const scale = (v: number) => bottom - v * (bottom - top);
  const parts: string[] = [
    `<text x="${width / 2}" y="18" text-anchor="middle" font-size="13" font-weight="bold">${esc(title)}</text>`,
    `<g transform="translate(0,22)">${legend(names, width)}</g>`,
  ];
  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(scale(tick))}" x2="${width - MARGIN.right}" y2="${fmt(scale(tick))}" stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${fmt(scale(tick) + 3)}" text-anchor="end" font-size="9">${tick}</text>`,
    );
  }
  groups.forEach((group, gi) => {
    const x0 = MARGIN.left + gi * groupWidth + 10;
    group.bars.forEach((bar, bi) => {
      if (bar.value === null) return; // gap
      const x = x0 + bi * 12;
      const y = scale(bar.value);
      parts.push(
        `<rect class="bar" x="${fmt(x)}" y="${fmt(y)}" width="10" height="${fmt(bottom - y)}" fill="${color(bar.name)}"/>`,
      );
    });
    const cx = x0 + (group.bars.length * 12) / 2;
    const words = group.label.split("_");
    words.forEach((word, wi) => {
      parts.push(
        `<text x="${fmt(cx)}" y="${bottom + 13 + wi * 11}" text-anchor="middle" font-size="9">${esc(word)}</text>`,
      );
    });
  });
  parts.push(`<line x1="${MARGIN.left}" y1="${bottom}" x2="${width - MARGIN.right}" y2="${bottom}" stroke="#333333"/>`);
  return svgDocument(width, height, parts.join("\n"));
}
