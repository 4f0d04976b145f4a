import fs from "node:fs";
import Papa from "papaparse";

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function loadCsv(path: string): Table {
  if (!fs.existsSync(path)) {
    throw new Error(`input file not found: ${path}`);
  }
  const text = fs.readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`failed to parse ${path}: ${first.message} (row ${first.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  return { path, columns, rows: parsed.data };
}

/** Fail with the first missing column named, per the renderer contract. */
export function requireColumns(table: Table, needed: string[]): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new Error(`${table.path}: missing column "${col}"`);
    }
  }
}

export function numeric(row: Record<string, string>, col: string): number {
  const v = row[col];
  if (v === undefined || v === "") return NaN;
  return Number(v);
}

/** Column-sorted unique values, for rebuilding a regular grid. */
export function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}
