import { Table, numeric, requireColumns, uniqueSorted } from "./csv.js";

/** Regular chart grid rebuilt from a row-major coverage-style CSV. */
export interface ChartGrid {
  xs: number[];
  ys: number[];
  /** cell value by [ix][iy]; NaN where masked out */
  value: (col: string) => number[][];
  inRoi: boolean[][];
  row: (ix: number, iy: number) => Record<string, string> | undefined;
}

export function chartGrid(table: Table): ChartGrid {
  requireColumns(table, ["x_m", "y_m", "in_roi"]);
  const xs = uniqueSorted(table.rows.map((r) => numeric(r, "x_m")));
  const ys = uniqueSorted(table.rows.map((r) => numeric(r, "y_m")));
  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const cells: (Record<string, string> | undefined)[][] = xs.map(() =>
    new Array(ys.length).fill(undefined),
  );
  const inRoi: boolean[][] = xs.map(() => new Array(ys.length).fill(false));
  for (const r of table.rows) {
    const i = xIndex.get(numeric(r, "x_m"));
    const j = yIndex.get(numeric(r, "y_m"));
    if (i === undefined || j === undefined) continue;
    cells[i][j] = r;
    inRoi[i][j] = r.in_roi === "1";
  }
  return {
    xs,
    ys,
    inRoi,
    row: (ix, iy) => cells[ix]?.[iy],
    value: (col: string) => {
      requireColumns(table, [col]);
      return xs.map((_, i) =>
        ys.map((_, j) => {
          const r = cells[i][j];
          if (!r || r.in_roi !== "1") return NaN;
          return numeric(r, col);
        }),
      );
    },
  };
}

export function finiteExtent(values: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (Number.isFinite(v)) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (lo > hi) throw new Error("no finite values inside the footprint");
  return [lo, hi];
}
