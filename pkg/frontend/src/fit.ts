/**
 * Log-log least squares, matching the fit the verification pipeline
 * reports.  Both sides regress ln Q on ln(-lambda) by ordinary least
 * squares, so the exponents agree to rounding.
 */

export interface PowerFit {
  exponent: number;
  amplitude: number;
  maxRelDev: number;
  points: number;
}

export function powerLawFit(lambdas: number[], qs: number[]): PowerFit {
  if (lambdas.length !== qs.length) {
    throw new Error("lambdas and qs differ in length");
  }
  if (lambdas.length < 3) {
    throw new Error("fit needs at least three points");
  }
  if (lambdas.some((l) => l >= 0) || qs.some((q) => q <= 0)) {
    throw new Error("fit needs lambda < 0 and Q > 0");
  }
  const x = lambdas.map((l) => Math.log(-l));
  const y = qs.map((q) => Math.log(q));
  const n = x.length;
  const xMean = x.reduce((a, b) => a + b, 0) / n;
  const yMean = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - xMean) * (x[i] - xMean);
    sxy += (x[i] - xMean) * (y[i] - yMean);
  }
  if (sxx === 0) {
    throw new Error("fit needs at least two distinct lambda values");
  }
  const exponent = sxy / sxx;
  const intercept = yMean - exponent * xMean;
  let maxRelDev = 0;
  for (let i = 0; i < n; i++) {
    const fitted = Math.exp(intercept + exponent * x[i]);
    maxRelDev = Math.max(maxRelDev, Math.abs(qs[i] - fitted) / qs[i]);
  }
  return { exponent, amplitude: Math.exp(intercept), maxRelDev, points: n };
}
