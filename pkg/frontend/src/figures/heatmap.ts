import { Table } from "../csv.js";
import { chartGrid, finiteExtent } from "../grid.js";
import { SvgDoc, colorbar, drawAxes, linearScale, rampColor } from "../svg.js";

const MARGIN = { left: 70, right: 90, top: 40, bottom: 50 };

/** Footprint heatmap of one numeric column; out-of-ellipse cells stay blank. */
export function renderHeatmap(table: Table, column: string): string {
  const grid = chartGrid(table);
  const values = grid.value(column);
  const [lo, hi] = finiteExtent(values);

  const plotW = 560;
  const aspect =
    (grid.ys[grid.ys.length - 1] - grid.ys[0]) / (grid.xs[grid.xs.length - 1] - grid.xs[0] || 1);
  const plotH = Math.max(140, Math.min(560, plotW * aspect));
  const doc = new SvgDoc(plotW + MARGIN.left + MARGIN.right, plotH + MARGIN.top + MARGIN.bottom);
  const frame = { x0: MARGIN.left, y0: MARGIN.top, w: plotW, h: plotH };

  const xScale = linearScale(grid.xs[0], grid.xs[grid.xs.length - 1], frame.x0, frame.x0 + frame.w);
  const yScale = linearScale(grid.ys[0], grid.ys[grid.ys.length - 1], frame.y0 + frame.h, frame.y0);
  const cellW = frame.w / Math.max(1, grid.xs.length - 1);
  const cellH = frame.h / Math.max(1, grid.ys.length - 1);

  for (let i = 0; i < grid.xs.length; i++) {
    for (let j = 0; j < grid.ys.length; j++) {
      const v = values[i][j];
      if (!Number.isFinite(v)) continue;
      const t = (v - lo) / (hi - lo || 1);
      doc.rect(
        xScale(grid.xs[i]) - cellW / 2,
        yScale(grid.ys[j]) - cellH / 2,
        cellW + 0.25,
        cellH + 0.25,
        rampColor(t),
      );
    }
  }

  const kmScale = linearScale(grid.xs[0] / 1e3, grid.xs[grid.xs.length - 1] / 1e3, frame.x0, frame.x0 + frame.w);
  const kmScaleY = linearScale(grid.ys[0] / 1e3, grid.ys[grid.ys.length - 1] / 1e3, frame.y0 + frame.h, frame.y0);
  drawAxes(doc, frame, kmScale, kmScaleY, "along-track x [km]", "cross-track y [km]");
  colorbar(doc, frame.x0 + frame.w + 20, frame.y0, 14, frame.h, lo, hi, column);
  doc.text(frame.x0 + frame.w / 2, 22, `${column} over the footprint`, 13);
  return doc.toString();
}
