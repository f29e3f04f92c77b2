#!/usr/bin/env node
/**
 * Batch renderer for gsbranch artifacts.
 *
 * Commands mirror the artifact kinds: plot-branch and plot-scaling read
 * a branch CSV, plot-convergence reads one or more rescale convergence
 * JSON files (two give the w/v overlay).  Output format follows the
 * file extension; SVG is the supported format.
 *
 * Exit codes: 0 success, 2 bad usage or a malformed artifact.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { parseBranchCsv, parseConvergenceJson } from "./schema.js";
import { renderBranchChart } from "./branchChart.js";
import { renderScalingChart } from "./scalingChart.js";
import { renderConvergenceChart } from "./convergenceChart.js";
import { fixed } from "./svg.js";

const USAGE = `usage: gsbranch-plots <command> --in FILE [--in FILE ...] --out FILE.svg [options]

commands:
  plot-branch       mass curve from a branch CSV (--in branch.csv)
  plot-scaling      log-log fit from a branch CSV; optional --window A:B
  plot-convergence  frame convergence from rescale JSON (repeat --in to overlay)

options:
  --in FILE      input artifact (repeatable for plot-convergence)
  --out FILE     output image; .svg is the supported extension
  --window A:B   lambda window for plot-scaling
  --title TEXT   override the chart title
`;

class UsageError extends Error {}

function parseWindow(text: string): [number, number] {
  const parts = text.split(":");
  if (parts.length !== 2) {
    throw new UsageError(`window ${JSON.stringify(text)} is not of the form A:B`);
  }
  const a = Number(parts[0]);
  const b = Number(parts[1]);
  if (!Number.isFinite(a) || !Number.isFinite(b)) {
    throw new UsageError(`window ${JSON.stringify(text)} has non-numeric endpoints`);
  }
  return [a, b];
}

function readInput(path: string): string {
  try {
    return readFileSync(path, "utf-8");
  } catch (err) {
    throw new UsageError(`cannot read ${path}: ${(err as NodeJS.ErrnoException).code ?? err}`);
  }
}

/**
 * Join "--window" with a following value so that windows over negative
 * lambda ("--window -4:-0.5") survive strict option parsing, which would
 * otherwise read the value as a bundle of short flags.
 */
function joinWindowValue(argv: string[]): string[] {
  const out: string[] = [];
  for (let i = 0; i < argv.length; i += 1) {
    if (argv[i] === "--window" && i + 1 < argv.length) {
      out.push(`--window=${argv[i + 1]}`);
      i += 1;
    } else {
      out.push(argv[i]);
    }
  }
  return out;
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: joinWindowValue(argv),
      allowPositionals: true,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        window: { type: "string" },
        title: { type: "string" },
        help: { type: "boolean" },
      },
    });
  } catch (err) {
    console.error((err as Error).message);
    console.error(USAGE);
    return 2;
  }
  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }

  try {
    const command = parsed.positionals[0];
    if (!command) {
      throw new UsageError("missing command");
    }
    if (parsed.positionals.length > 1) {
      throw new UsageError(`unexpected arguments: ${parsed.positionals.slice(1).join(" ")}`);
    }
    const inputs = parsed.values.in ?? [];
    const out = parsed.values.out;
    if (inputs.length === 0) {
      throw new UsageError("--in is required");
    }
    if (!out) {
      throw new UsageError("--out is required");
    }
    if (!out.endsWith(".svg")) {
      throw new UsageError(`output ${out}: only .svg output is supported`);
    }
    const title = parsed.values.title;

    if (command === "plot-branch") {
      if (inputs.length !== 1) {
        throw new UsageError("plot-branch takes exactly one --in");
      }
      const points = parseBranchCsv(readInput(inputs[0]), basename(inputs[0]));
      const { svg, analysis } = renderBranchChart(points, { title });
      writeFileSync(out, svg);
      const note =
        analysis.interiorMax !== null
          ? `rho_max ${fixed(analysis.interiorMax.rhoMax, 4)} at lambda ${fixed(analysis.interiorMax.lambda, 3)}`
          : analysis.slope !== null
            ? `slope ${fixed(analysis.slope, 3)}`
            : "no annotation";
      console.log(`plot-branch: ${points.length} points, ${note} -> ${out}`);
      return 0;
    }

    if (command === "plot-scaling") {
      if (inputs.length !== 1) {
        throw new UsageError("plot-scaling takes exactly one --in");
      }
      const window = parsed.values.window ? parseWindow(parsed.values.window) : undefined;
      const points = parseBranchCsv(readInput(inputs[0]), basename(inputs[0]));
      const { svg, fit } = renderScalingChart(points, window, { title });
      writeFileSync(out, svg);
      console.log(
        `plot-scaling: slope ${fixed(fit.exponent, 3)} over ${fit.points} points -> ${out}`
      );
      return 0;
    }

    if (command === "plot-convergence") {
      const reports = inputs.map((path) => parseConvergenceJson(readInput(path), basename(path)));
      const { svg } = renderConvergenceChart(reports, { title });
      writeFileSync(out, svg);
      const frames = reports.map((r) => r.frame).join(",");
      console.log(`plot-convergence: frames ${frames} -> ${out}`);
      return 0;
    }

    throw new UsageError(`unknown command ${JSON.stringify(command)}`);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      console.error(USAGE);
    } else {
      console.error((err as Error).message);
    }
    return 2;
  }
}

const isMain =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
