import fs from "node:fs";

export type FigureKind = "effects" | "completeness" | "control";

export class SchemaMismatch extends Error {}

export const SCHEMAS: Record<FigureKind, string[]> = {
  effects: ["notion", "n", "m", "samples", "effect", "numerator", "denominator", "frequency"],
  completeness: ["notion", "bin_percent", "samples", "effect", "numerator", "denominator", "frequency"],
  control: ["notion", "control_type", "numerator", "denominator", "frequency"],
};

/** A row of either effects-style dataset, keyed by its x-axis value. */
export interface EffectRow {
  notion: string;
  x: number;
  effect: string;
  numerator: number;
  denominator: number;
  /** null when the denominator was zero — a gap, never a zero */
  frequency: number | null;
}

export interface ControlRow {
  notion: string;
  controlType: string;
  numerator: number;
  denominator: number;
  frequency: number | null;
}

export function parseCsv(text: string): { header: string[]; records: string[][] } {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new SchemaMismatch("empty CSV document");
  const [head, ...rest] = lines;
  const header = head.split(",");
  const records = rest.map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaMismatch(`row ${i + 2} has ${cells.length} cells, header has ${header.length}`);
    }
    return cells;
  });
  return { header, records };
}

function checkHeader(kind: FigureKind, header: string[]): void {
  const expected = SCHEMAS[kind];
  if (header.length !== expected.length || header.some((h, i) => h !== expected[i])) {
    throw new SchemaMismatch(
      `expected ${kind} header "${expected.join(",")}", got "${header.join(",")}"`,
    );
  }
}

function num(cell: string, what: string): number {
  const value = Number(cell);
  if (cell === "" || Number.isNaN(value)) throw new SchemaMismatch(`${what} is not a number: "${cell}"`);
  return value;
}

function freq(cell: string): number | null {
  return cell === "" ? null : num(cell, "frequency");
}

export function loadEffectRows(text: string, kind: "effects" | "completeness"): EffectRow[] {
  const { header, records } = parseCsv(text);
  checkHeader(kind, header);
  return records.map((cells) => ({
    notion: cells[0],
    x: num(cells[1], header[1]),
    effect: cells[kind === "effects" ? 4 : 3],
    numerator: num(cells[header.indexOf("numerator")], "numerator"),
    denominator: num(cells[header.indexOf("denominator")], "denominator"),
    frequency: freq(cells[header.indexOf("frequency")]),
  }));
}

export function loadControlRows(text: string): ControlRow[] {
  const { header, records } = parseCsv(text);
  checkHeader("control", header);
  return records.map((cells) => ({
    notion: cells[0],
    controlType: cells[1],
    numerator: num(cells[2], "numerator"),
    denominator: num(cells[3], "denominator"),
    frequency: freq(cells[4]),
  }));
}

export function readCsvFile(path: string): string {
  if (!fs.existsSync(path)) throw new Error(`no such file: ${path}`);
  return fs.readFileSync(path, "utf8");
}
