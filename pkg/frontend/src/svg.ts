/** Deterministic SVG building blocks: fixed number formatting, no
 *  timestamps, no randomness, so identical inputs give identical bytes. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const r = Math.round(x * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
}

export interface Scale {
  (value: number): number;
  lo: number;
  hi: number;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const f = ((value: number) => outLo + ((value - lo) / span) * (outHi - outLo)) as Scale;
  f.lo = lo;
  f.hi = hi;
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const span = Math.log10(hi) - llo || 1;
  const f = ((value: number) =>
    outLo + ((Math.log10(value) - llo) / span) * (outHi - outLo)) as Scale;
  f.lo = lo;
  f.hi = hi;
  return f;
}

/** Tick positions at 1/2/5 steps covering [lo, hi]. */
export function ticks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm <= 1.5 ? 1 : norm <= 3.5 ? 2 : norm <= 7.5 ? 5 : 10) * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

const RAMP: [number, number, number][] = [
  [0x44, 0x01, 0x54],
  [0x3b, 0x52, 0x8b],
  [0x21, 0x91, 0x8c],
  [0x5e, 0xc9, 0x62],
  [0xfd, 0xe7, 0x25],
];

/** Sequential colormap over [0, 1]. */
export function rampColor(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(x));
  const f = x - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const [r, g, b] = [0, 1, 2].map((k) => mix(RAMP[i][k], RAMP[i + 1][k]));
  return `#${[r, g, b].map((v) => v.toString(16).padStart(2, "0")).join("")}`;
}

const CATEGORICAL = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
  "#86bcb6", "#d37295", "#a0cbe8", "#ffbe7d", "#8cd17d",
  "#f1ce63", "#d4a6c8", "#fabfd2", "#d7b5a6", "#79706e",
];

export function categoricalColor(index: number): string {
  return CATEGORICAL[((index % CATEGORICAL.length) + CATEGORICAL.length) % CATEGORICAL.length];
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    );
  }

  raw(el: string): void {
    this.parts.push(el);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  path(d: string, stroke: string, width = 1.5, dash = ""): void {
    const dd = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dd}/>`);
  }

  text(x: number, y: number, s: string, size = 11, anchor = "middle", fill = "#000000", rotate = 0): void {
    const transform = rotate ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" fill="${fill}"${transform}>${escapeXml(s)}</text>`,
    );
  }

  toString(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polylinePath(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? "M" : "L"}${fmt(xs[i])} ${fmt(ys[i])}`);
  }
  return parts.join(" ");
}

export interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

/** Axis frame with tick marks and labels; y grows upward in data space. */
export function drawAxes(
  doc: SvgDoc,
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  xTicks?: number[],
  xTickFmt?: (v: number) => string,
): void {
  const { x0, y0, w, h } = frame;
  doc.raw(`<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${fmt(w)}" height="${fmt(h)}" fill="none" stroke="#000000"/>`);
  const showX = xTicks ?? ticks(xScale.lo, xScale.hi);
  const fmtX = xTickFmt ?? ((v: number) => fmt(v));
  for (const t of showX) {
    const px = xScale(t);
    if (px < x0 - 0.5 || px > x0 + w + 0.5) continue;
    doc.line(px, y0 + h, px, y0 + h + 4, "#000000");
    doc.text(px, y0 + h + 15, fmtX(t), 10);
  }
  for (const t of ticks(yScale.lo, yScale.hi)) {
    const py = yScale(t);
    if (py < y0 - 0.5 || py > y0 + h + 0.5) continue;
    doc.line(x0 - 4, py, x0, py, "#000000");
    doc.text(x0 - 7, py + 3, fmt(t), 10, "end");
  }
  doc.text(x0 + w / 2, y0 + h + 30, xLabel, 11);
  doc.text(x0 - 42, y0 + h / 2, yLabel, 11, "middle", "#000000", -90);
}

export function colorbar(
  doc: SvgDoc,
  x: number,
  y: number,
  w: number,
  h: number,
  lo: number,
  hi: number,
  label: string,
): void {
  const steps = 64;
  for (let i = 0; i < steps; i++) {
    const t = i / (steps - 1);
    doc.rect(x, y + h - ((i + 1) * h) / steps, w, h / steps + 0.5, rampColor(t));
  }
  doc.raw(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="none" stroke="#000000"/>`);
  for (const t of ticks(lo, hi, 5)) {
    const py = y + h - ((t - lo) / (hi - lo || 1)) * h;
    doc.line(x + w, py, x + w + 3, py, "#000000");
    doc.text(x + w + 6, py + 3, fmt(t), 9, "start");
  }
  doc.text(x + w / 2, y - 8, label, 10);
}
