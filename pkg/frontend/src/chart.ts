/**
 * Shared chart furniture: frame layout, axes, gridlines, legend, title.
 * Each renderer composes these around its own marks.
 */

import { el, fmt, fmtTick, text, type Attrs } from "./svg.js";
import type { Scale } from "./scale.js";

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export function makeFrame(width = 720, height = 480): Frame {
  return { width, height, left: 72, right: 28, top: 48, bottom: 56 };
}

export function plotArea(frame: Frame): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: frame.left,
    x1: frame.width - frame.right,
    y0: frame.top,
    y1: frame.height - frame.bottom,
  };
}

const AXIS_COLOR = "#333333";
const GRID_COLOR = "#e3e3e3";
const FONT_SIZE = 12;

export function xAxis(scale: Scale, frame: Frame, label: string): string[] {
  const { x0, x1, y1 } = plotArea(frame);
  const parts: string[] = [
    el("line", { x1: x0, y1: y1, x2: x1, y2: y1, stroke: AXIS_COLOR, "stroke-width": 1 }),
  ];
  for (const tick of scale.ticks()) {
    const px = scale.map(tick);
    parts.push(el("line", { x1: px, y1: y1, x2: px, y2: y1 + 5, stroke: AXIS_COLOR, "stroke-width": 1 }));
    parts.push(
      text(px, y1 + 19, fmtTick(tick), {
        "text-anchor": "middle",
        "font-size": FONT_SIZE,
        fill: AXIS_COLOR,
      })
    );
  }
  parts.push(
    text((x0 + x1) / 2, frame.height - 12, label, {
      "text-anchor": "middle",
      "font-size": FONT_SIZE + 1,
      fill: AXIS_COLOR,
    })
  );
  return parts;
}

export function yAxis(scale: Scale, frame: Frame, label: string): string[] {
  const { x0, y0, y1 } = plotArea(frame);
  const parts: string[] = [
    el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: AXIS_COLOR, "stroke-width": 1 }),
  ];
  for (const tick of scale.ticks()) {
    const py = scale.map(tick);
    parts.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: AXIS_COLOR, "stroke-width": 1 }));
    parts.push(
      text(x0 - 8, py + 4, fmtTick(tick), {
        "text-anchor": "end",
        "font-size": FONT_SIZE,
        fill: AXIS_COLOR,
      })
    );
  }
  parts.push(
    el(
      "g",
      { transform: `translate(16, ${fmt((y0 + y1) / 2)}) rotate(-90)` },
      text(0, 0, label, { "text-anchor": "middle", "font-size": FONT_SIZE + 1, fill: AXIS_COLOR })
    )
  );
  return parts;
}

export function gridLines(xScale: Scale, yScale: Scale, frame: Frame): string[] {
  const { x0, x1, y0, y1 } = plotArea(frame);
  const parts: string[] = [];
  for (const tick of xScale.ticks()) {
    const px = xScale.map(tick);
    parts.push(el("line", { x1: px, y1: y0, x2: px, y2: y1, stroke: GRID_COLOR, "stroke-width": 1 }));
  }
  for (const tick of yScale.ticks()) {
    const py = yScale.map(tick);
    parts.push(el("line", { x1: x0, y1: py, x2: x1, y2: py, stroke: GRID_COLOR, "stroke-width": 1 }));
  }
  return parts;
}

export function chartTitle(title: string, frame: Frame): string {
  return text(frame.width / 2, 24, title, {
    "text-anchor": "middle",
    "font-size": 15,
    "font-weight": "bold",
    fill: "#111111",
  });
}

export interface LegendEntry {
  label: string;
  color: string;
  dashed?: boolean;
}

export function legend(entries: LegendEntry[], frame: Frame): string[] {
  const { x1, y0 } = plotArea(frame);
  const lineLength = 18;
  const rowHeight = 16;
  const parts: string[] = [];
  entries.forEach((entry, i) => {
    const y = y0 + 12 + i * rowHeight;
    const attrs: Attrs = {
      x1: x1 - 150,
      y1: y - 4,
      x2: x1 - 150 + lineLength,
      y2: y - 4,
      stroke: entry.color,
      "stroke-width": 2,
    };
    if (entry.dashed) attrs["stroke-dasharray"] = "5 3";
    parts.push(el("line", attrs));
    parts.push(
      text(x1 - 150 + lineLength + 6, y, entry.label, { "font-size": FONT_SIZE, fill: AXIS_COLOR })
    );
  });
  return parts;
}

export function polylinePath(coords: Array<[number, number]>): string {
  return coords
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join(" ");
}
