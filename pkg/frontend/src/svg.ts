/**
 * String-level SVG assembly.  Rendering stays deterministic: fixed
 * attribute order as written, fixed number formatting, no timestamps,
 * no randomness.  The same inputs always produce byte-identical files.
 */

export type Attrs = Record<string, string | number>;

/** Fixed-precision coordinate, trailing zeros stripped, no negative zero. */
export function fmt(value: number, digits = 2): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate ${value}`);
  }
  let text = value.toFixed(digits);
  if (text.includes(".")) {
    text = text.replace(/0+$/, "").replace(/\.$/, "");
  }
  return text === "-0" ? "0" : text;
}

/** toFixed that keeps its digits but never renders a negative zero. */
export function fixed(value: number, digits: number): string {
  const text = value.toFixed(digits);
  return /^-0(?:\.0+)?$/.test(text) ? text.slice(1) : text;
}

/** Tick-label formatting: compact decimals, exponential far from 1. */
export function fmtTick(value: number): string {
  if (value === 0) return "0";
  const mag = Math.abs(value);
  if (mag >= 1e4 || mag < 1e-3) {
    const exp = Math.floor(Math.log10(mag) + 1e-12);
    const mant = value / Math.pow(10, exp);
    const mantText = fmt(mant, 2);
    return mantText === "1" ? `1e${exp}` : `${mantText}e${exp}`;
  }
  return fmt(value, 4);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Attrs, children: string[] | string = []): string {
  const attrText = Object.entries(attrs)
    .map(([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : esc(value)}"`)
    .join(" ");
  const open = attrText ? `<${tag} ${attrText}>` : `<${tag}>`;
  const body = Array.isArray(children) ? children.join("") : children;
  if (body === "") {
    return attrText ? `<${tag} ${attrText}/>` : `<${tag}/>`;
  }
  return `${open}${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el("text", { x: fmt(x), y: fmt(y), ...attrs }, esc(content));
}

export function svgDocument(width: number, height: number, children: string[]): string {
  const body = [
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...children,
  ].join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    body +
    "\n</svg>\n"
  );
}
