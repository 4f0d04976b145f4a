import { Table, numeric, requireColumns } from "../csv.js";
import { chartGrid } from "../grid.js";
import { SvgDoc, categoricalColor, drawAxes, linearScale } from "../svg.js";

const MARGIN = { left: 70, right: 30, top: 40, bottom: 50 };

/** Beam-cell tiling with cell boundaries and per-beam peak-gain markers. */
export function renderCells(table: Table): string {
  requireColumns(table, ["best_beam", "gtx_db"]);
  const grid = chartGrid(table);

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

  const beam: number[][] = grid.xs.map((_, i) =>
    grid.ys.map((_, j) => {
      const r = grid.row(i, j);
      return r && r.in_roi === "1" ? Number(r.best_beam) : -1;
    }),
  );

  // peak-gain marker per beam: the grid point where its own gain tops out
  const peak = new Map<number, { x: number; y: number; g: number }>();
  for (let i = 0; i < grid.xs.length; i++) {
    for (let j = 0; j < grid.ys.length; j++) {
      const b = beam[i][j];
      if (b < 0) continue;
      const g = numeric(grid.row(i, j)!, "gtx_db");
      const cur = peak.get(b);
      if (!cur || g > cur.g) peak.set(b, { x: grid.xs[i], y: grid.ys[j], g });
      doc.rect(
        xScale(grid.xs[i]) - cellW / 2,
        yScale(grid.ys[j]) - cellH / 2,
        cellW + 0.25,
        cellH + 0.25,
        categoricalColor(b),
      );
    }
  }

  // boundary strokes where the owning beam changes between neighbours
  for (let i = 0; i < grid.xs.length; i++) {
    for (let j = 0; j < grid.ys.length; j++) {
      if (beam[i][j] < 0) continue;
      if (i + 1 < grid.xs.length && beam[i + 1][j] >= 0 && beam[i + 1][j] !== beam[i][j]) {
        const px = (xScale(grid.xs[i]) + xScale(grid.xs[i + 1])) / 2;
        doc.line(px, yScale(grid.ys[j]) - cellH / 2, px, yScale(grid.ys[j]) + cellH / 2, "#000000", 0.8);
      }
      if (j + 1 < grid.ys.length && beam[i][j + 1] >= 0 && beam[i][j + 1] !== beam[i][j]) {
        const py = (yScale(grid.ys[j]) + yScale(grid.ys[j + 1])) / 2;
        doc.line(xScale(grid.xs[i]) - cellW / 2, py, xScale(grid.xs[i]) + cellW / 2, py, "#000000", 0.8);
      }
    }
  }

  const beams = [...peak.keys()].sort((a, b) => a - b);
  for (const b of beams) {
    const p = peak.get(b)!;
    doc.circle(xScale(p.x), yScale(p.y), 3.5, "#0a7d00");
    doc.text(xScale(p.x), yScale(p.y) - 6, String(b), 9);
  }

  const kmX = linearScale(grid.xs[0] / 1e3, grid.xs[grid.xs.length - 1] / 1e3, frame.x0, frame.x0 + frame.w);
  const kmY = linearScale(grid.ys[0] / 1e3, grid.ys[grid.ys.length - 1] / 1e3, frame.y0 + frame.h, frame.y0);
  drawAxes(doc, frame, kmX, kmY, "along-track x [km]", "cross-track y [km]");
  doc.text(frame.x0 + frame.w / 2, 22, `beam cells (${beams.length} beams, peak gain marked)`, 13);
  return doc.toString();
}
