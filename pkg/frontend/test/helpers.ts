import { BRANCH_HEADER } from "../src/schema.js";

export interface RowSpec {
  lambda: number;
  Q: number;
  Phi?: number;
  morse?: number | null;
  dQdlambda?: number;
  stability?: string;
  checkpoint?: string;
}

/** Branch CSV text in the exact shape the solver CLI writes. */
export function branchCsv(rows: RowSpec[]): string {
  const lines = [BRANCH_HEADER.join(",")];
  for (const row of rows) {
    lines.push(
      [
        String(row.lambda),
        String(row.Q),
        String(row.Phi ?? -0.5 * row.lambda * row.Q),
        row.morse === null || row.morse === undefined ? "" : String(row.morse),
        String(row.dQdlambda ?? 0),
        "1e-09",
        "1e-10",
        row.stability ?? "marginal",
        row.checkpoint ?? "-",
      ].join(",")
    );
  }
  return lines.join("\n") + "\n";
}

/** Sampled power law Q = amplitude * (-lambda)^exponent. */
export function powerLawRows(
  exponent: number,
  amplitude: number,
  lambdas: number[],
  stability = "stable"
): RowSpec[] {
  return lambdas.map((lambda) => ({
    lambda,
    Q: amplitude * Math.pow(-lambda, exponent),
    stability,
  }));
}
