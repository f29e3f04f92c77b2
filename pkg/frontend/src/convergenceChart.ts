/**
 * Rescaled-profile convergence: relative distance to the limit state
 * against |lambda|, one curve per frame, log-log.  Null or non-positive
 * distances break the curve into separate segments, so skipped entries
 * read as gaps rather than interpolated lies.
 */

import type { ConvergenceReport } from "./schema.js";
import { el, svgDocument } from "./svg.js";
import { extentOf, logScale, padLog } from "./scale.js";
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

export interface ConvergenceChartOptions {
  width?: number;
  height?: number;
  title?: string;
}

const FRAME_COLORS: Record<"w" | "v", string> = {
  w: "#2166ac",
  v: "#e08214",
};

interface PlottablePoint {
  x: number;
  y: number;
}

function segmentsOf(report: ConvergenceReport): PlottablePoint[][] {
  const segments: PlottablePoint[][] = [];
  let current: PlottablePoint[] = [];
  for (let i = 0; i < report.lambdas.length; i++) {
    const d = report.distances[i];
    if (d === null || !Number.isFinite(d) || d <= 0) {
      if (current.length > 0) segments.push(current);
      current = [];
      continue;
    }
    current.push({ x: Math.abs(report.lambdas[i]), y: d });
  }
  if (current.length > 0) segments.push(current);
  return segments;
}

export function renderConvergenceChart(
  reports: ConvergenceReport[],
  options: ConvergenceChartOptions = {}
): { svg: string } {
  if (reports.length === 0) {
    throw new Error("no convergence reports to render");
  }
  const allSegments = reports.map(segmentsOf);
  const valid = allSegments.flat(2);
  if (valid.length === 0) {
    throw new Error("no plottable distances in any report");
  }

  const frame = makeFrame(options.width, options.height);
  const area = plotArea(frame);
  const xScale = logScale(padLog(extentOf(valid.map((p) => p.x))), [area.x0, area.x1]);
  const yScale = logScale(padLog(extentOf(valid.map((p) => p.y))), [area.y1, area.y0]);

  const marks: string[] = [];
  reports.forEach((report, ri) => {
    const color = FRAME_COLORS[report.frame];
    for (const segment of allSegments[ri]) {
      if (segment.length >= 2) {
        marks.push(
          el("path", {
            d: polylinePath(segment.map((p) => [xScale.map(p.x), yScale.map(p.y)])),
            fill: "none",
            stroke: color,
            "stroke-width": 2,
          })
        );
      }
      for (const p of segment) {
        marks.push(
          el("circle", { cx: xScale.map(p.x), cy: yScale.map(p.y), r: 3, fill: color })
        );
      }
    }
  });

  const seen = new Set<string>();
  const entries: LegendEntry[] = [];
  for (const report of reports) {
    const label = `${report.frame} frame`;
    if (!seen.has(label)) {
      seen.add(label);
      entries.push({ label, color: FRAME_COLORS[report.frame] });
    }
  }

  const svg = svgDocument(frame.width, frame.height, [
    ...gridLines(xScale, yScale, frame),
    ...xAxis(xScale, frame, "|lambda|"),
    ...yAxis(yScale, frame, "relative distance to limit"),
    ...marks,
    ...legend(entries, frame),
    chartTitle(options.title ?? "Convergence to the scaling limit", frame),
  ]);
  return { svg };
}
