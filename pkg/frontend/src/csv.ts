/**
 * Minimal CSV reading for the experiment runner's output schemas.
 *
 * The runner never quotes or escapes fields, so parsing is a plain split;
 * all validation errors name the offending file and column so the CLI can
 * exit with a useful diagnostic.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) {
    throw new SchemaError(`${path}: expected a header row and at least one data row`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${cells.length} fields, header has ${header.length}`,
      );
    }
    return cells;
  });
  return { path, header, rows };
}

/** Map required column names to indices; missing columns are reported together. */
export function columnIndex(table: Table, required: string[]): Map<string, number> {
  const index = new Map<string, number>();
  const missing: string[] = [];
  for (const name of required) {
    const i = table.header.indexOf(name);
    if (i < 0) {
      missing.push(name);
    } else {
      index.set(name, i);
    }
  }
  if (missing.length > 0) {
    throw new SchemaError(
      `${table.path}: missing column(s) ${missing.join(", ")}; ` +
      `found: ${table.header.join(", ")}`,
    );
  }
  return index;
}

export function toNumber(table: Table, row: number, col: number): number {
  const raw = table.rows[row][col];
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(
      `${table.path}: row ${row + 2}, column ${table.header[col]}: ` +
      `expected a number, got ${JSON.stringify(raw)}`,
    );
  }
  return value;
}
