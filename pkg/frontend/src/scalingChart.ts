/**
 * Log-log scaling plot: branch masses against -lambda with the
 * least-squares power-law fit drawn through them and the fitted slope
 * annotated to three decimals.
 */

import type { BranchPoint } from "./schema.js";
import { powerLawFit, type PowerFit } from "./fit.js";
import { el, fixed, svgDocument, text } from "./svg.js";
import { extentOf, logScale, padLog } from "./scale.js";
import {
  chartTitle,
  gridLines,
  legend,
  makeFrame,
  plotArea,
  xAxis,
  yAxis,
} from "./chart.js";

export interface ScalingChartOptions {
  width?: number;
  height?: number;
  title?: string;
}

export interface ScalingChartResult {
  svg: string;
  fit: PowerFit;
}

const POINT_COLOR = "#3d3d3d";
const FIT_COLOR = "#b2182b";

export function renderScalingChart(
  points: BranchPoint[],
  window?: [number, number],
  options: ScalingChartOptions = {}
): ScalingChartResult {
  let selected = points;
  if (window) {
    const lo = Math.min(window[0], window[1]);
    const hi = Math.max(window[0], window[1]);
    selected = points.filter((p) => p.lambda >= lo && p.lambda <= hi);
    if (selected.length === 0) {
      throw new Error(`window ${window[0]}:${window[1]} selects no branch points`);
    }
  }
  const fit = powerLawFit(
    selected.map((p) => p.lambda),
    selected.map((p) => p.Q)
  );

  const frame = makeFrame(options.width, options.height);
  const area = plotArea(frame);
  const xs = selected.map((p) => -p.lambda);
  const xScale = logScale(padLog(extentOf(xs)), [area.x0, area.x1]);
  const yScale = logScale(padLog(extentOf(selected.map((p) => p.Q))), [area.y1, area.y0]);

  const marks: string[] = [];
  const [xLo, xHi] = xScale.domain;
  const lineY = (x: number) => fit.amplitude * Math.pow(x, fit.exponent);
  marks.push(
    el("line", {
      x1: xScale.map(xLo),
      y1: yScale.map(lineY(xLo)),
      x2: xScale.map(xHi),
      y2: yScale.map(lineY(xHi)),
      stroke: FIT_COLOR,
      "stroke-width": 1.5,
      "stroke-dasharray": "6 4",
    })
  );
  for (const p of selected) {
    marks.push(
      el("circle", {
        cx: xScale.map(-p.lambda),
        cy: yScale.map(p.Q),
        r: 3,
        fill: "none",
        stroke: POINT_COLOR,
        "stroke-width": 1.5,
      })
    );
  }

  const annotation = text(
    area.x0 + 10,
    area.y0 + 16,
    `slope ${fixed(fit.exponent, 3)} (max rel dev ${fit.maxRelDev.toExponential(1)})`,
    { "font-size": 12, fill: "#222222" }
  );

  const svg = svgDocument(frame.width, frame.height, [
    ...gridLines(xScale, yScale, frame),
    ...xAxis(xScale, frame, "-lambda"),
    ...yAxis(yScale, frame, "Q"),
    ...marks,
    annotation,
    ...legend(
      [
        { label: "branch points", color: POINT_COLOR },
        { label: "power-law fit", color: FIT_COLOR, dashed: true },
      ],
      frame
    ),
    chartTitle(options.title ?? "Mass-curve scaling", frame),
  ]);
  return { svg, fit };
}
