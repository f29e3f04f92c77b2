import { describe, expect, it } from "vitest";

import { analyzeBranch, renderBranchChart, STABILITY_COLORS } from "../src/branchChart.js";
import { parseBranchCsv } from "../src/schema.js";
import { branchCsv, powerLawRows } from "./helpers.js";

describe("analyzeBranch", () => {
  it("finds the interior maximum of a humped branch", () => {
    const rows = [
      { lambda: -0.1, Q: 1.4, stability: "stable" },
      { lambda: -0.5, Q: 3.1, stability: "stable" },
      { lambda: -2.0, Q: 2.8, stability: "unstable" },
      { lambda: -8.0, Q: 1.7, stability: "unstable" },
    ];
    const analysis = analyzeBranch(parseBranchCsv(branchCsv(rows)));
    expect(analysis.interiorMax).not.toBeNull();
    expect(analysis.interiorMax!.rhoMax).toBeCloseTo(3.1);
    expect(analysis.interiorMax!.lambda).toBeCloseTo(-0.5);
    expect(analysis.slope).toBeNull();
  });

  it("does not let flat-branch jitter count as an interior maximum", () => {
    const rows = [
      { lambda: -4, Q: 5.8504 },
      { lambda: -2, Q: 5.85045 },
      { lambda: -1, Q: 5.85041 },
    ];
    const analysis = analyzeBranch(parseBranchCsv(branchCsv(rows)));
    expect(analysis.interiorMax).toBeNull();
    expect(Math.abs(analysis.slope!)).toBeLessThan(0.01);
  });

  it("fits the slope of a monotone power-law branch", () => {
    const points = parseBranchCsv(
      branchCsv(powerLawRows(2.0, 1.5, [-0.5, -1, -2, -4]))
    );
    const analysis = analyzeBranch(points);
    expect(analysis.interiorMax).toBeNull();
    expect(analysis.slope).toBeCloseTo(2.0, 10);
  });
});

describe("renderBranchChart", () => {
  it("renders a small branch with stability colors and morse markers", () => {
    const rows = [
      { lambda: -1, Q: 2.5, morse: 1, stability: "stable" },
      { lambda: -2, Q: 5.1, morse: 1, stability: "stable" },
      { lambda: -3, Q: 7.9, morse: 2, stability: "unstable" },
    ];
    const { svg } = renderBranchChart(parseBranchCsv(branchCsv(rows)));
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg).toContain(STABILITY_COLORS.stable);
    expect(svg).toContain(STABILITY_COLORS.unstable);
    expect(svg).toContain("m=1");
    expect(svg).toContain("m=2");
    expect(svg.endsWith("</svg>\n")).toBe(true);
  });

  it("annotates a near-zero slope on a flat branch", () => {
    const rows = [-0.25, -0.5, -1, -2, -4].map((lambda) => ({
      lambda,
      Q: 5.8504,
      stability: "marginal",
    }));
    const { svg, analysis } = renderBranchChart(parseBranchCsv(branchCsv(rows)));
    expect(analysis.slope).not.toBeNull();
    expect(Math.abs(analysis.slope!)).toBeLessThan(1e-10);
    expect(svg).toContain("log-log slope 0.000");
  });

  it("never renders a negative-zero slope", () => {
    const rows = [-0.25, -0.5, -1, -2, -4].map((lambda, i) => ({
      lambda,
      Q: 5.8504 - 1e-9 * i,
      stability: "marginal",
    }));
    const { svg, analysis } = renderBranchChart(parseBranchCsv(branchCsv(rows)));
    expect(analysis.slope!).toBeLessThan(0);
    expect(svg).toContain("log-log slope 0.000");
    expect(svg).not.toContain("-0.000");
  });

  it("annotates rho_max instead of a slope on a humped branch", () => {
    const rows = [
      { lambda: -0.1, Q: 1.4 },
      { lambda: -0.5, Q: 3.13 },
      { lambda: -2.0, Q: 2.8 },
      { lambda: -8.0, Q: 1.7 },
    ];
    const { svg } = renderBranchChart(parseBranchCsv(branchCsv(rows)));
    expect(svg).toContain("rho_max = 3.1300");
    expect(svg).not.toContain("log-log slope");
  });

  it("is deterministic", () => {
    const points = parseBranchCsv(
      branchCsv(powerLawRows(1.0, 2.0, [-0.5, -1, -2, -4, -8]))
    );
    const first = renderBranchChart(points).svg;
    const second = renderBranchChart(points).svg;
    expect(second).toBe(first);
  });
});
