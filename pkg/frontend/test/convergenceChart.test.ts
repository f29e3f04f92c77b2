import { describe, expect, it } from "vitest";

import { renderConvergenceChart } from "../src/convergenceChart.js";
import type { ConvergenceReport } from "../src/schema.js";

const wReport: ConvergenceReport = {
  frame: "w",
  lambdas: [-0.4, -0.2, -0.1, -0.05],
  distances: [0.09, 0.05, 0.026, 0.013],
  limitMass: 11.7,
};

const vReport: ConvergenceReport = {
  frame: "v",
  lambdas: [-8, -16, -30],
  distances: [0.06, 0.031, 0.016],
  limitMass: 0.93,
};

function countPaths(svg: string): number {
  return (svg.match(/<path /g) ?? []).length;
}

describe("renderConvergenceChart", () => {
  it("renders a single monotone curve", () => {
    const { svg } = renderConvergenceChart([wReport]);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(countPaths(svg)).toBe(1);
    expect(svg).toContain("w frame");
  });

  it("shows skipped entries as gaps", () => {
    const gappy: ConvergenceReport = {
      ...wReport,
      distances: [0.09, null, 0.026, 0.013],
    };
    const { svg } = renderConvergenceChart([gappy]);
    expect(countPaths(svg)).toBe(1);
    const solid = renderConvergenceChart([wReport]).svg;
    expect(svg).not.toBe(solid);
    const twoGaps: ConvergenceReport = {
      frame: "w",
      lambdas: [-0.4, -0.3, -0.2, -0.1, -0.05],
      distances: [0.09, 0.07, null, 0.026, 0.013],
      limitMass: 11.7,
    };
    expect(countPaths(renderConvergenceChart([twoGaps]).svg)).toBe(2);
  });

  it("overlays the two frames with a legend entry each", () => {
    const { svg } = renderConvergenceChart([wReport, vReport]);
    expect(svg).toContain("w frame");
    expect(svg).toContain("v frame");
    expect(countPaths(svg)).toBe(2);
  });

  it("rejects inputs with nothing to plot", () => {
    expect(() => renderConvergenceChart([])).toThrow(/no convergence reports/);
    expect(() =>
      renderConvergenceChart([{ ...wReport, distances: [null, null, null, null] }])
    ).toThrow(/no plottable distances/);
  });
});
