/**
 * Parsers for the gsbranch artifact formats.
 *
 * Three files cross the component boundary: the branch CSV written by
 * `gsbranch continue`, the convergence JSON written by `gsbranch rescale`,
 * and the check-list JSON written by `gsbranch verify`.  Everything here
 * validates strictly and throws SchemaError on any deviation; silent
 * coercion of a malformed artifact would defeat the point of plotting it.
 */

import Papa from "papaparse";
import { z } from "zod";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export const BRANCH_HEADER = [
  "lambda",
  "Q",
  "Phi",
  "morse",
  "dQdlambda",
  "pohozaev_res",
  "nehari_res",
  "stability",
  "checkpoint",
] as const;

export type Stability = "stable" | "unstable" | "marginal";

export interface BranchPoint {
  lambda: number;
  Q: number;
  Phi: number;
  morse: number | null;
  dQdlambda: number;
  pohozaevRes: number;
  nehariRes: number;
  stability: Stability;
  checkpoint: string;
}

const STABILITIES: ReadonlySet<string> = new Set(["stable", "unstable", "marginal"]);

/** Python float repr tokens: finite shortest-round-trip, nan, or signed inf. */
function parseFloatToken(token: string, where: string): number {
  if (token === "nan") return NaN;
  if (token === "inf") return Infinity;
  if (token === "-inf") return -Infinity;
  if (token.trim() === "" || /\s/.test(token)) {
    throw new SchemaError(`${where}: empty or padded numeric field ${JSON.stringify(token)}`);
  }
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${where}: not a float: ${JSON.stringify(token)}`);
  }
  return value;
}

export function parseBranchCsv(text: string, name = "branch csv"): BranchPoint[] {
  const parsed = Papa.parse<string[]>(text.trim(), { delimiter: "," });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${name}: ${first.message} (row ${first.row})`);
  }
  const rows = parsed.data.filter((row) => !(row.length === 1 && row[0] === ""));
  if (rows.length === 0) {
    throw new SchemaError(`${name}: empty file`);
  }
  const header = rows[0];
  if (header.length !== BRANCH_HEADER.length || header.some((h, i) => h !== BRANCH_HEADER[i])) {
    throw new SchemaError(
      `${name}: header ${JSON.stringify(header)} does not match ${JSON.stringify([...BRANCH_HEADER])}`
    );
  }
  const points: BranchPoint[] = [];
  rows.slice(1).forEach((row, index) => {
    const where = `${name} row ${index + 2}`;
    if (row.length !== BRANCH_HEADER.length) {
      throw new SchemaError(`${where}: expected ${BRANCH_HEADER.length} fields, got ${row.length}`);
    }
    const morseToken = row[3];
    let morse: number | null = null;
    if (morseToken !== "") {
      if (!/^-?\d+$/.test(morseToken)) {
        throw new SchemaError(`${where}: morse must be an integer or empty, got ${JSON.stringify(morseToken)}`);
      }
      morse = Number(morseToken);
    }
    const stability = row[7];
    if (!STABILITIES.has(stability)) {
      throw new SchemaError(`${where}: unknown stability label ${JSON.stringify(stability)}`);
    }
    points.push({
      lambda: parseFloatToken(row[0], `${where} lambda`),
      Q: parseFloatToken(row[1], `${where} Q`),
      Phi: parseFloatToken(row[2], `${where} Phi`),
      morse,
      dQdlambda: parseFloatToken(row[4], `${where} dQdlambda`),
      pohozaevRes: parseFloatToken(row[5], `${where} pohozaev_res`),
      nehariRes: parseFloatToken(row[6], `${where} nehari_res`),
      stability: stability as Stability,
      checkpoint: row[8],
    });
  });
  if (points.length === 0) {
    throw new SchemaError(`${name}: no data rows`);
  }
  for (const pt of points) {
    if (!Number.isFinite(pt.lambda) || !Number.isFinite(pt.Q)) {
      throw new SchemaError(`${name}: lambda and Q must be finite (lambda=${pt.lambda}, Q=${pt.Q})`);
    }
  }
  return points;
}

const convergenceSchema = z.object({
  command: z.literal("rescale"),
  frame: z.enum(["w", "v"]),
  lambdas: z.array(z.number()),
  distances: z.array(z.union([z.number(), z.null()])),
  limit_mass: z.number(),
  seed: z.number().int(),
});

export interface ConvergenceReport {
  frame: "w" | "v";
  lambdas: number[];
  /** null marks a skipped entry; charts show these as gaps. */
  distances: (number | null)[];
  limitMass: number;
}

export function parseConvergenceJson(text: string, name = "convergence json"): ConvergenceReport {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`${name}: ${(err as Error).message}`);
  }
  const result = convergenceSchema.safeParse(raw);
  if (!result.success) {
    throw new SchemaError(`${name}: ${result.error.issues[0].message} at ${result.error.issues[0].path.join(".")}`);
  }
  const data = result.data;
  if (data.lambdas.length !== data.distances.length) {
    throw new SchemaError(
      `${name}: lambdas (${data.lambdas.length}) and distances (${data.distances.length}) differ in length`
    );
  }
  if (data.lambdas.length === 0) {
    throw new SchemaError(`${name}: empty report`);
  }
  return {
    frame: data.frame,
    lambdas: data.lambdas,
    distances: data.distances,
    limitMass: data.limit_mass,
  };
}

const checkSchema = z.object({
  name: z.string(),
  passed: z.boolean(),
  measured: z.union([z.number(), z.null()]),
  expected: z.union([z.number(), z.null()]),
  tolerance: z.union([z.number(), z.null()]),
  detail: z.string(),
});

const verifySchema = z.object({
  command: z.literal("verify"),
  checks: z.array(checkSchema),
  passed: z.boolean(),
});

export interface VerifyCheck {
  name: string;
  passed: boolean;
  measured: number | null;
  expected: number | null;
  tolerance: number | null;
  detail: string;
}

export interface VerifyReport {
  checks: VerifyCheck[];
  passed: boolean;
}

export function parseVerifyJson(text: string, name = "verify json"): VerifyReport {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`${name}: ${(err as Error).message}`);
  }
  const result = verifySchema.safeParse(raw);
  if (!result.success) {
    throw new SchemaError(`${name}: ${result.error.issues[0].message} at ${result.error.issues[0].path.join(".")}`);
  }
  return { checks: result.data.checks, passed: result.data.passed };
}

/** The fitted mass-curve exponent out of a verify report, if present. */
export function fittedExponent(report: VerifyReport): number | null {
  const check = report.checks.find((c) => c.name === "mass_curve_exponent");
  return check?.measured ?? null;
}
