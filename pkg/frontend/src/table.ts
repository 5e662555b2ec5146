import { readFileSync } from "node:fs";

/** A parsed numeric CSV with named columns. */
export interface Table {
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

/**
 * Read a CSV produced by the dppdc CLI and check that every required column
 * is present; the error names the first missing column.
 */
export function readCsv(path: string, required: string[]): Table {
  const text = readFileSync(path, "utf-8").trim();
  const lines = text.split(/\r?\n/);
  if (lines.length < 1) throw new SchemaError(`${path}: empty file`);
  const columns = lines[0].split(",").map((c) => c.trim());
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new SchemaError(`${path}: missing required column '${col}'`);
    }
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].length === 0) continue;
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `${path}:${i + 1}: expected ${columns.length} fields, got ${parts.length}`,
      );
    }
    rows.push(parts.map(Number));
  }
  return { columns, rows };
}

/** Min/max of a numeric array without spreading it onto the call stack. */
export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Column accessor; the column is known present after readCsv validation. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing required column '${name}'`);
  return table.rows.map((r) => r[idx]);
}

export interface ClusterMember {
  lambda_um: number;
  theta_x: number;
  theta_y: number;
}

export interface ClusterRecord {
  kind: string;
  y_branch: string;
  shared: ClusterMember;
  coupled_b: ClusterMember;
  coupled_c: ClusterMember;
}

export interface ClusterFile {
  n_clusters: number;
  clusters: ClusterRecord[];
}

export function readClusters(path: string): ClusterFile {
  const data = JSON.parse(readFileSync(path, "utf-8"));
  if (!Array.isArray(data.clusters)) {
    throw new SchemaError(`${path}: missing required column 'clusters'`);
  }
  for (const rec of data.clusters) {
    for (const key of ["shared", "coupled_b", "coupled_c"]) {
      if (!(key in rec)) {
        throw new SchemaError(`${path}: cluster record missing '${key}'`);
      }
    }
  }
  return data as ClusterFile;
}
