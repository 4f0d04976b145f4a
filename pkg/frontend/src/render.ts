import fs from "node:fs";
import path from "node:path";

import { loadCsv } from "./csv.js";
import { renderCells } from "./figures/cells.js";
import { renderCuts } from "./figures/cuts.js";
import { renderHeatmap } from "./figures/heatmap.js";
import { renderSweep } from "./figures/sweep.js";
import { renderTimeline } from "./figures/timeline.js";

export const KINDS = ["heatmap", "cells", "cuts", "timeline", "sweep"] as const;
export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  /** numeric column for heatmap/cuts; defaults to snr_db */
  column?: string;
}

/** Render one figure to SVG; inputs are only ever read. */
export function render(spec: FigureSpec): string {
  const table = loadCsv(spec.input);
  const column = spec.column ?? "snr_db";
  let svg: string;
  switch (spec.kind) {
    case "heatmap":
      svg = renderHeatmap(table, column);
      break;
    case "cells":
      svg = renderCells(table);
      break;
    case "cuts":
      svg = renderCuts(table, column);
      break;
    case "timeline":
      svg = renderTimeline(table);
      break;
    case "sweep":
      svg = renderSweep(table);
      break;
    default:
      throw new Error(`unknown figure kind: ${spec.kind as string}`);
  }
  fs.mkdirSync(path.dirname(path.resolve(spec.output)), { recursive: true });
  fs.writeFileSync(spec.output, svg);
  return svg;
}
