import { Table, numeric, requireColumns } from "../csv.js";
import {
  SvgDoc,
  Scale,
  categoricalColor,
  drawAxes,
  fmt,
  linearScale,
  logScale,
  polylinePath,
} from "../svg.js";

const PANEL_W = 430;
const PANEL_H = 200;
const MARGIN = { left: 70, right: 170, top: 45, bottom: 55 };
const VGAP = 60;

const X_LABEL: Record<string, string> = {
  alpha: "leakage factor",
  elevation: "elevation [deg]",
  error_deg: "pointing error [deg]",
  bits: "phase bits",
};

/** Terminal-antenna sweep curves, one panel per sweep family. */
export function renderSweep(table: Table): string {
  requireColumns(table, ["sweep", "param", "series", "value_db"]);
  const sweeps = [...new Set(table.rows.map((r) => r.sweep))];
  if (sweeps.length === 0) throw new Error(`${table.path}: no sweep rows`);

  const height = MARGIN.top + sweeps.length * PANEL_H + (sweeps.length - 1) * VGAP + MARGIN.bottom;
  const doc = new SvgDoc(MARGIN.left + PANEL_W + MARGIN.right, height);

  sweeps.forEach((sweep, k) => {
    const rows = table.rows.filter((r) => r.sweep === sweep);
    const series = [...new Set(rows.map((r) => r.series))];
    const params = rows.map((r) => numeric(r, "param"));
    const values = rows.map((r) => numeric(r, "value_db"));
    const frame = {
      x0: MARGIN.left,
      y0: MARGIN.top + k * (PANEL_H + VGAP),
      w: PANEL_W,
      h: PANEL_H,
    };
    const pLo = Math.min(...params);
    const pHi = Math.max(...params);
    const vLo = Math.min(...values);
    const vHi = Math.max(...values);
    const pad = 0.06 * (vHi - vLo || 1);
    const useLog = sweep === "alpha" && pLo > 0;
    const xs: Scale = useLog
      ? logScale(pLo, pHi, frame.x0, frame.x0 + frame.w)
      : linearScale(pLo, pHi, frame.x0, frame.x0 + frame.w);
    const ys = linearScale(vLo - pad, vHi + pad, frame.y0 + frame.h, frame.y0);

    const xTicks = useLog
      ? [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0].filter((v) => v >= pLo && v <= pHi)
      : undefined;
    drawAxes(doc, frame, xs, ys, X_LABEL[sweep] ?? sweep, "gain [dB]", xTicks,
      useLog ? (v) => String(v) : undefined);

    series.forEach((name, s) => {
      const pts = rows
        .filter((r) => r.series === name)
        .map((r) => [numeric(r, "param"), numeric(r, "value_db")] as const)
        .sort((a, b) => a[0] - b[0]);
      const color = categoricalColor(s);
      doc.path(polylinePath(pts.map((p) => xs(p[0])), pts.map((p) => ys(p[1]))), color, 1.6);
      const lx = frame.x0 + frame.w + 12;
      const ly = frame.y0 + 12 + s * 14;
      doc.line(lx, ly - 3, lx + 16, ly - 3, color, 2);
      doc.text(lx + 20, ly, name, 10, "start");
    });
    doc.text(frame.x0 + frame.w / 2, frame.y0 - 8, `sweep: ${sweep}`, 11);
  });

  doc.text((MARGIN.left + PANEL_W + MARGIN.right) / 2, 22, "terminal antenna gain sweeps", 13);
  return doc.toString();
}
