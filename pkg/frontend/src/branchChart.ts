/**
 * Branch diagram: the mass curve Q(lambda) with stability-colored
 * segments, Morse-index markers, and either a fitted log-log slope
 * annotation (power-law shaped branches) or the interior-maximum
 * annotation that matters for normalized solving.
 */

import type { BranchPoint, Stability } from "./schema.js";
import { powerLawFit } from "./fit.js";
import { el, fixed, svgDocument, text } from "./svg.js";
import { extentOf, linearScale, padLinear } from "./scale.js";
import {
  chartTitle,
  gridLines,
  legend,
  makeFrame,
  plotArea,
  polylinePath,
  xAxis,
  yAxis,
  type LegendEntry,
} from "./chart.js";

export const STABILITY_COLORS: Record<Stability, string> = {
  stable: "#2166ac",
  marginal: "#737373",
  unstable: "#b2182b",
};

export interface BranchChartOptions {
  width?: number;
  height?: number;
  title?: string;
}

export interface InteriorMax {
  lambda: number;
  rhoMax: number;
}

export interface BranchAnalysis {
  /** Fitted log-log exponent, or null when an interior maximum makes
   *  the power-law reading meaningless. */
  slope: number | null;
  interiorMax: InteriorMax | null;
}

/** An interior maximum must clear both endpoint masses by 0.5% so that
 *  solver-level jitter on a flat branch does not count. */
const INTERIOR_MARGIN = 1.005;

export function analyzeBranch(points: BranchPoint[]): BranchAnalysis {
  const sorted = [...points].sort((a, b) => a.lambda - b.lambda);
  const qs = sorted.map((p) => p.Q);
  let argMax = 0;
  for (let i = 1; i < qs.length; i++) {
    if (qs[i] > qs[argMax]) argMax = i;
  }
  let interiorMax: InteriorMax | null = null;
  if (
    argMax > 0 &&
    argMax < qs.length - 1 &&
    qs[argMax] >= INTERIOR_MARGIN * Math.max(qs[0], qs[qs.length - 1])
  ) {
    interiorMax = { lambda: sorted[argMax].lambda, rhoMax: qs[argMax] };
  }
  let slope: number | null = null;
  if (interiorMax === null && sorted.length >= 3) {
    const fittable = sorted.every((p) => p.lambda < 0 && p.Q > 0);
    if (fittable) {
      slope = powerLawFit(
        sorted.map((p) => p.lambda),
        qs
      ).exponent;
    }
  }
  return { slope, interiorMax };
}

export interface BranchChartResult {
  svg: string;
  analysis: BranchAnalysis;
}

export function renderBranchChart(
  points: BranchPoint[],
  options: BranchChartOptions = {}
): BranchChartResult {
  const frame = makeFrame(options.width, options.height);
  const area = plotArea(frame);
  const sorted = [...points].sort((a, b) => a.lambda - b.lambda);
  const analysis = analyzeBranch(sorted);

  const qExtent = extentOf(sorted.map((p) => p.Q));
  const flat = qExtent[1] - qExtent[0] < 0.02 * qExtent[1];
  const yDomain: [number, number] = flat
    ? [0, qExtent[1] * 1.15]
    : padLinear(qExtent);
  const xScale = linearScale(padLinear(extentOf(sorted.map((p) => p.lambda))), [area.x0, area.x1]);
  const yScale = linearScale(yDomain, [area.y1, area.y0]);

  const marks: string[] = [];

  // Stability-colored runs, each extended to the next point so the
  // curve stays visually connected across label changes.
  let runStart = 0;
  const present = new Set<Stability>();
  for (let i = 1; i <= sorted.length; i++) {
    const runEnds = i === sorted.length || sorted[i].stability !== sorted[runStart].stability;
    if (!runEnds) continue;
    const run = sorted.slice(runStart, Math.min(i + 1, sorted.length));
    if (run.length >= 2) {
      marks.push(
        el("path", {
          d: polylinePath(run.map((p) => [xScale.map(p.lambda), yScale.map(p.Q)])),
          fill: "none",
          stroke: STABILITY_COLORS[sorted[runStart].stability],
          "stroke-width": 2,
        })
      );
    }
    present.add(sorted[runStart].stability);
    runStart = i;
  }
  if (sorted.length === 1) {
    present.add(sorted[0].stability);
  }

  for (const p of sorted) {
    marks.push(
      el("circle", {
        cx: xScale.map(p.lambda),
        cy: yScale.map(p.Q),
        r: 2.2,
        fill: STABILITY_COLORS[p.stability],
      })
    );
  }

  // Morse-index markers: ring every indexed point, label the changes.
  let lastMorse: number | null = null;
  for (const p of sorted) {
    if (p.morse === null) continue;
    marks.push(
      el("circle", {
        cx: xScale.map(p.lambda),
        cy: yScale.map(p.Q),
        r: 4.5,
        fill: "none",
        stroke: "#222222",
        "stroke-width": 1,
      })
    );
    if (p.morse !== lastMorse) {
      marks.push(
        text(xScale.map(p.lambda), yScale.map(p.Q) - 9, `m=${p.morse}`, {
          "text-anchor": "middle",
          "font-size": 11,
          fill: "#222222",
        })
      );
      lastMorse = p.morse;
    }
  }

  const annotations: string[] = [];
  if (analysis.interiorMax !== null) {
    const { lambda, rhoMax } = analysis.interiorMax;
    annotations.push(
      el("line", {
        x1: xScale.map(lambda),
        y1: area.y0,
        x2: xScale.map(lambda),
        y2: area.y1,
        stroke: "#888888",
        "stroke-width": 1,
        "stroke-dasharray": "4 3",
      })
    );
    annotations.push(
      text(area.x0 + 10, area.y0 + 16, `rho_max = ${fixed(rhoMax, 4)} at lambda = ${fixed(lambda, 3)}`, {
        "font-size": 12,
        fill: "#222222",
      })
    );
  } else if (analysis.slope !== null) {
    annotations.push(
      text(area.x0 + 10, area.y0 + 16, `log-log slope ${fixed(analysis.slope, 3)}`, {
        "font-size": 12,
        fill: "#222222",
      })
    );
  }

  const legendEntries: LegendEntry[] = (["stable", "marginal", "unstable"] as Stability[])
    .filter((s) => present.has(s))
    .map((s) => ({ label: s, color: STABILITY_COLORS[s] }));

  const svg = svgDocument(frame.width, frame.height, [
    ...gridLines(xScale, yScale, frame),
    ...xAxis(xScale, frame, "lambda"),
    ...yAxis(yScale, frame, "Q"),
    ...marks,
    ...annotations,
    ...legend(legendEntries, frame),
    chartTitle(options.title ?? "Mass curve along the branch", frame),
  ]);
  return { svg, analysis };
}
