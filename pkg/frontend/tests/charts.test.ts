import { describe, expect, it } from "vitest";

import {
  groupedBarFigure,
  linePanelFigure,
  seriesSegments,
} from "../src/charts.js";
import { renderText } from "../src/plot.js";

describe("seriesSegments", () => {
  it("splits runs at null frequencies", () => {
    const segments = seriesSegments({
      name: "CW",
      points: [
        { x: 1, y: 0.5 },
        { x: 3, y: 0.6 },
        { x: 5, y: null },
        { x: 7, y: 0.7 },
      ],
    });
    expect(segments).toHaveLength(2);
    expect(segments[0].map((p) => p.x)).toEqual([1, 3]);
    expect(segments[1].map((p) => p.x)).toEqual([7]);
  });

  it("drops fully-null series", () => {
    expect(seriesSegments({ name: "CW", points: [{ x: 1, y: null }] })).toHaveLength(0);
  });
});

describe("linePanelFigure", () => {
  it("renders a gap as two separate strokes", () => {
    const svg = linePanelFigure(
      [
        {
          title: "demo",
          series: [
            {
              name: "CW",
              points: [
                { x: 1, y: 0.2 },
                { x: 3, y: 0.4 },
                { x: 5, y: null },
                { x: 7, y: 0.5 },
                { x: 9, y: 0.6 },
              ],
            },
          ],
        },
      ],
      "number of agents",
    );
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
  });
});

describe("groupedBarFigure", () => {
  it("omits bars for null values", () => {
    const svg = groupedBarFigure(
      [
        { label: "lose", bars: [{ name: "CW", value: 0.25 }, { name: "MajDom", value: null }] },
      ],
      "demo",
    );
    const bars = svg.match(/<rect class="bar"[^>]*/g) ?? [];
    expect(bars).toHaveLength(1);
    expect(bars[0]).toContain("#1f77b4");
  });
});

describe("renderText", () => {
  it("builds the four-panel effects figure", () => {
    const csv = [
      "notion,n,m,samples,effect,numerator,denominator,frequency",
      ...[3, 5].flatMap((n) =>
        ["PreservedIdentity", "PreservedExistenceOnly", "Lost", "Generated", "AbsencePreserved"].map(
          (e) => `CW,${n},5,10,${e},1,2,0.5`,
        ),
      ),
    ].join("\n");
    const svg = renderText("effects", csv);
    expect(svg).toContain("Preserving consensus");
    expect(svg).toContain("Losing consensus");
    expect(svg).toContain("Generating consensus");
    expect(svg).toContain("Preserving absence of consensus");
  });

  it("adds the preserved-identity and existence-only frequencies", () => {
    const csv = [
      "notion,n,m,samples,effect,numerator,denominator,frequency",
      "CW,3,5,10,PreservedIdentity,3,4,0.75",
      "CW,3,5,10,PreservedExistenceOnly,1,4,0.25",
      "CW,3,5,10,Lost,0,4,0.0",
      "CW,3,5,10,Generated,4,6,0.6666666666666666",
      "CW,3,5,10,AbsencePreserved,2,6,0.3333333333333333",
      "CW,5,5,10,PreservedIdentity,2,4,0.5",
      "CW,5,5,10,PreservedExistenceOnly,0,4,0.0",
      "CW,5,5,10,Lost,2,4,0.5",
      "CW,5,5,10,Generated,0,6,0.0",
      "CW,5,5,10,AbsencePreserved,6,6,1.0",
    ].join("\n");
    const svg = renderText("effects", csv);
    // preservation panel point for n=3 sits at y for 1.0, i.e. the top line
    expect(svg).toContain("<polyline");
    expect(svg).toContain("circle");
  });

  it("filters notions when asked", () => {
    const csv = [
      "notion,control_type,numerator,denominator,frequency",
      "CW,lose,1,10,0.1",
      "MajUD,lose,2,10,0.2",
    ].join("\n");
    const svg = renderText("control", csv, ["CW"]);
    expect(svg).toContain("#1f77b4");
    expect(svg).not.toContain("#d62728");
  });
});
