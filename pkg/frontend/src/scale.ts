/**
 * Axis scales for the chart renderers: plain linear and base-10 log,
 * each with a tick generator tuned for small static figures.
 */

export interface Scale {
  map(value: number): number;
  ticks(): number[];
  domain: [number, number];
}

function niceStep(span: number, target: number): number {
  const raw = span / Math.max(1, target);
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (power * mult >= raw) return power * mult;
  }
  return power * 10;
}

export function linearScale(domain: [number, number], range: [number, number], tickCount = 6): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  if (!(span > 0)) {
    throw new Error(`degenerate linear domain [${d0}, ${d1}]`);
  }
  return {
    domain,
    map: (value) => r0 + ((value - d0) / span) * (r1 - r0),
    ticks: () => {
      const step = niceStep(span, tickCount);
      const first = Math.ceil(d0 / step) * step;
      const out: number[] = [];
      for (let v = first; v <= d1 + step * 1e-9; v += step) {
        out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
      }
      return out;
    },
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  if (!(d0 > 0 && d1 > d0)) {
    throw new Error(`log domain needs 0 < lo < hi, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  return {
    domain,
    map: (value) => r0 + ((Math.log10(value) - l0) / (l1 - l0)) * (r1 - r0),
    ticks: () => {
      const decades = l1 - l0;
      const mantissas = decades > 3 ? [1] : decades > 1.2 ? [1, 2, 5] : [1, 1.5, 2, 3, 5, 7];
      const out: number[] = [];
      for (let exp = Math.floor(l0); exp <= Math.ceil(l1); exp++) {
        for (const m of mantissas) {
          const v = m * Math.pow(10, exp);
          if (v >= d0 * (1 - 1e-9) && v <= d1 * (1 + 1e-9)) out.push(v);
        }
      }
      return out;
    },
  };
}

/** Pad a [lo, hi] data extent multiplicatively for log axes. */
export function padLog(extent: [number, number], factor = 1.15): [number, number] {
  return [extent[0] / factor, extent[1] * factor];
}

/** Pad a [lo, hi] data extent additively for linear axes. */
export function padLinear(extent: [number, number], fraction = 0.06): [number, number] {
  const span = extent[1] - extent[0];
  const pad = span > 0 ? span * fraction : Math.max(1e-9, Math.abs(extent[0]) * fraction + 1e-12);
  return [extent[0] - pad, extent[1] + pad];
}

export function extentOf(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (!(lo <= hi)) {
    throw new Error("no finite values to scale");
  }
  return [lo, hi];
}
