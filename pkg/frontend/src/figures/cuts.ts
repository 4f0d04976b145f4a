import { Table } from "../csv.js";
import { chartGrid, finiteExtent } from "../grid.js";
import { SvgDoc, drawAxes, linearScale, polylinePath } from "../svg.js";

const PANEL_W = 360;
const PANEL_H = 240;
const MARGIN = { left: 70, right: 25, top: 45, bottom: 55 };
const GAP = 70;

interface Curve {
  pos: number[];
  max: number[];
  min: number[];
}

function envelope(values: number[][], along: number[]): Curve {
  const pos: number[] = [];
  const max: number[] = [];
  const min: number[] = [];
  for (let i = 0; i < along.length; i++) {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values[i]) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
    if (lo <= hi) {
      pos.push(along[i]);
      max.push(hi);
      min.push(lo);
    }
  }
  return { pos, max, min };
}

/** Per-axis SNR envelopes (max and min across the other axis). */
export function renderCuts(table: Table, column: string): string {
  const grid = chartGrid(table);
  const values = grid.value(column);
  const transposed = grid.ys.map((_, j) => grid.xs.map((_, i) => values[i][j]));
  const xCut = envelope(values, grid.xs);
  const yCut = envelope(transposed, grid.ys);
  const [lo, hi] = finiteExtent(values);

  const width = MARGIN.left + PANEL_W + GAP + PANEL_W + MARGIN.right;
  const height = MARGIN.top + PANEL_H + MARGIN.bottom;
  const doc = new SvgDoc(width, height);

  const panels: [Curve, string, number][] = [
    [xCut, "along-track x [km]", MARGIN.left],
    [yCut, "cross-track y [km]", MARGIN.left + PANEL_W + GAP],
  ];
  for (const [curve, label, x0] of panels) {
    const frame = { x0, y0: MARGIN.top, w: PANEL_W, h: PANEL_H };
    const posKm = curve.pos.map((v) => v / 1e3);
    const xs = linearScale(posKm[0], posKm[posKm.length - 1], frame.x0, frame.x0 + frame.w);
    const pad = 0.05 * (hi - lo || 1);
    const ys = linearScale(lo - pad, hi + pad, frame.y0 + frame.h, frame.y0);
    drawAxes(doc, frame, xs, ys, label, `${column} [dB]`);
    doc.path(polylinePath(posKm.map(xs), curve.max.map(ys)), "#4e79a7", 1.6);
    doc.path(polylinePath(posKm.map(xs), curve.min.map(ys)), "#e15759", 1.6, "5,3");
    doc.text(frame.x0 + frame.w - 4, frame.y0 + 14, "max", 10, "end", "#4e79a7");
    doc.text(frame.x0 + frame.w - 4, frame.y0 + 27, "min (boundary)", 10, "end", "#e15759");
  }
  doc.text(width / 2, 22, `${column} range over both axes`, 13);
  return doc.toString();
}
