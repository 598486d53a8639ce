/**
 * Parser for the CLI's CSV flavor: optional `# key = value` metadata lines,
 * a header row, then comma-separated data rows.
 */

export interface Table {
  meta: Record<string, string>;
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const meta: Record<string, string> = {};
  let header: string[] | null = null;
  const rows: string[][] = [];
  for (const rawLine of text.split(/\r?\n/)) {
    const line = rawLine.trim();
    if (line.length === 0) continue;
    if (line.startsWith("#")) {
      const stripped = line.slice(1).trim();
      const eq = stripped.indexOf("=");
      if (eq > 0) {
        meta[stripped.slice(0, eq).trim()] = stripped.slice(eq + 1).trim();
      }
      continue;
    }
    if (header === null) {
      header = line.split(",").map((c) => c.trim());
    } else {
      rows.push(line.split(","));
    }
  }
  if (header === null) {
    throw new SchemaError("schema-mismatch: file contains no header row");
  }
  for (const [i, row] of rows.entries()) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `schema-mismatch: row ${i + 1} has ${row.length} cells, ` +
          `expected ${header.length}`,
      );
    }
  }
  return { meta, header, rows };
}

/** Columns the table must carry; names the first missing one. */
export function requireColumns(table: Table, columns: string[], kind: string) {
  for (const col of columns) {
    if (!table.header.includes(col)) {
      throw new SchemaError(
        `schema-mismatch: ${kind} input lacks column '${col}' ` +
          `(found: ${table.header.join(", ")})`,
      );
    }
  }
  if (table.rows.length === 0) {
    throw new SchemaError(`schema-mismatch: ${kind} input has no data rows`);
  }
}

/** Numeric column accessor with a column-level diagnostic on bad cells. */
export function numericColumn(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`schema-mismatch: missing column '${name}'`);
  }
  return table.rows.map((row, i) => {
    const cell = row[idx]!;
    const value = Number(cell);
    if (cell.trim() === "" || Number.isNaN(value)) {
      throw new SchemaError(
        `schema-mismatch: column '${name}' row ${i + 1} is not numeric ` +
          `('${cell}')`,
      );
    }
    return value;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`schema-mismatch: missing column '${name}'`);
  }
  return table.rows.map((row) => row[idx]!);
}
