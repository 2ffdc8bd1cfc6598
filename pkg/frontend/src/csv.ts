/**
 * Reader for the simulator's self-describing CSV artifacts.
 *
 * Files start with `#`-prefixed header comments (`# key=value`, including the
 * embedded `config.*` entries), followed by a column-name row and data rows.
 */

import { readFileSync } from "fs";

export interface CsvTable {
  /** header comment entries, e.g. meta["figure"], meta["config.ofdm.n_sub_tdd"] */
  meta: Map<string, string>;
  columns: string[];
  /** raw cell strings, one array per data row */
  rows: string[][];
}

export class CsvFormatError extends Error {}

export function parseCsv(text: string): CsvTable {
  const meta = new Map<string, string>();
  const lines = text.split(/\r?\n/);
  let i = 0;
  for (; i < lines.length; i++) {
    const line = lines[i];
    if (!line.startsWith("#")) break;
    const body = line.replace(/^#\s*/, "");
    // a comment line may carry several space-separated key=value tokens
    for (const token of body.split(/\s+/)) {
      const eq = token.indexOf("=");
      if (eq > 0) meta.set(token.slice(0, eq), token.slice(eq + 1));
    }
  }
  if (i >= lines.length || lines[i].trim() === "") {
    throw new CsvFormatError("no column header row found");
  }
  const columns = lines[i].split(",").map((c) => c.trim());
  const rows: string[][] = [];
  for (i += 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new CsvFormatError(
        `row ${rows.length + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells);
  }
  return { meta, columns, rows };
}

export function readCsv(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf-8"));
}

/** Numeric column accessor; fails loudly on anything non-numeric. */
export function numericColumn(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvFormatError(`column '${name}' missing from CSV`);
  }
  return table.rows.map((row, r) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value) && row[idx] !== "inf" && row[idx] !== "nan") {
      throw new CsvFormatError(`column '${name}' row ${r + 1}: not numeric (${row[idx]})`);
    }
    return value;
  });
}

export function stringColumn(table: CsvTable, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvFormatError(`column '${name}' missing from CSV`);
  }
  return table.rows.map((row) => row[idx]);
}
