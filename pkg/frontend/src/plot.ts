import fs from "node:fs";

import {
  BarGroup,
  groupedBarFigure,
  linePanelFigure,
  NOTION_ORDER,
  Panel,
  Series,
} from "./charts.js";
import {
  EffectRow,
  FigureKind,
  loadControlRows,
  loadEffectRows,
  readCsvFile,
} from "./csv.js";

export interface PlotSpec {
  kind: FigureKind;
  input: string;
  output: string;
  /** optional notion filter, e.g. ["CW", "MajUD"] */
  notions?: string[];
}

// Panel layout mirrors the four effect families; the two "preserved" flavours
// share a denominator, so their frequencies add up to existence preservation.
const EFFECT_PANELS: { title: string; effects: string[] }[] = [
  { title: "Preserving consensus", effects: ["PreservedIdentity", "PreservedExistenceOnly"] },
  { title: "Losing consensus", effects: ["Lost"] },
  { title: "Generating consensus", effects: ["Generated"] },
  { title: "Preserving absence of consensus", effects: ["AbsencePreserved"] },
];

const CONTROL_TYPES = [
  "preserve_existence",
  "preserve_identity",
  "lose",
  "prevent_generation",
  "generate",
  "choose_alternative",
];

function notionsIn(rows: { notion: string }[], filter?: string[]): string[] {
  const present = new Set(rows.map((r) => r.notion));
  return NOTION_ORDER.filter(
    (n) => present.has(n) && (!filter || filter.includes(n)),
  );
}

function panelSeries(rows: EffectRow[], notion: string, effects: string[]): Series {
  const xs = [...new Set(rows.map((r) => r.x))].sort((a, b) => a - b);
  const points = xs.map((x) => {
    const cells = effects.map((e) =>
      rows.find((r) => r.notion === notion && r.x === x && r.effect === e),
    );
    if (cells.some((c) => c === undefined || c.frequency === null)) {
      return { x, y: null };
    }
    return { x, y: cells.reduce((acc, c) => acc + (c!.frequency as number), 0) };
  });
  return { name: notion, points };
}

export function renderEffectsLike(
  text: string,
  kind: "effects" | "completeness",
  filter?: string[],
): string {
  const rows = loadEffectRows(text, kind);
  const notions = notionsIn(rows, filter);
  const panels: Panel[] = EFFECT_PANELS.map(({ title, effects }) => ({
    title,
    series: notions.map((n) => panelSeries(rows, n, effects)),
  }));
  const xLabel = kind === "effects" ? "number of agents" : "completeness (%)";
  return linePanelFigure(panels, xLabel);
}

export function renderControl(text: string, filter?: string[]): string {
  const rows = loadControlRows(text);
  const notions = notionsIn(rows, filter);
  const groups: BarGroup[] = CONTROL_TYPES.map((type) => ({
    label: type,
    bars: notions.map((n) => {
      const row = rows.find((r) => r.notion === n && r.controlType === type);
      return { name: n, value: row === undefined ? null : row.frequency };
    }),
  }));
  return groupedBarFigure(groups, "Frequency of each control type");
}

export function renderText(kind: FigureKind, text: string, filter?: string[]): string {
  if (kind === "control") return renderControl(text, filter);
  return renderEffectsLike(text, kind, filter);
}

export function render(spec: PlotSpec): void {
  const svg = renderText(spec.kind, readCsvFile(spec.input), spec.notions);
  fs.writeFileSync(spec.output, svg + "\n");
}
