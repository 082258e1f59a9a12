#!/usr/bin/env node
import { SchemaMismatch } from "./csv.js";
import { render, PlotSpec } from "./plot.js";

function arg(name: string): string {
  const i = process.argv.indexOf(name);
  if (i < 0) return "";
  return String(process.argv[i + 1] ?? "");
}

const kind = arg("--kind");
const input = arg("--in");
const output = arg("--out");
const notions = arg("--notions");

if (!["effects", "completeness", "control"].includes(kind) || !input || !output) {
  console.error(
    "usage: consensus-md-plot --kind <effects|completeness|control> --in <csv> --out <svg> [--notions CW,MajUD,...]",
  );
  process.exit(2);
}

const spec: PlotSpec = {
  kind: kind as PlotSpec["kind"],
  input,
  output,
  notions: notions ? notions.split(",") : undefined,
};

try {
  render(spec);
  console.log(`wrote ${output}`);
} catch (err) {
  if (err instanceof SchemaMismatch) {
    console.error(`schema mismatch: ${(err as Error).message}`);
  } else {
    console.error((err as Error).message);
  }
  process.exit(1);
}
