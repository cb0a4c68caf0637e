/**
 * Parsers for the two CSV schemas the simulator emits:
 *
 *  - experiment sweeps: design,countermeasures,seed,rank,clock_index,delta1,delta
 *    One series per (design, countermeasures) block; deltas averaged over
 *    seeds at each rank / clock index.
 *  - attack reports: rank,clock_index,delta1,delta,candidate_hex
 *    One series per file.
 *
 * Lines starting with '#' are metadata and ignored. Parsing never mutates
 * the input files.
 */

import { basename } from "node:path";

export interface Series {
  label: string;
  /** delta per rank (1..54), rank order */
  byRank: number[] | null;
  /** delta per clock index (1..54), clock order */
  byClock: number[] | null;
}

export const CANDIDATES = 54;

interface Row {
  [column: string]: string;
}

function splitCsv(text: string): { header: string[]; rows: Row[] } {
  const lines = text.split(/\r?\n/).filter(
    (l) => l.length > 0 && !l.startsWith("#"),
  );
  if (lines.length === 0) {
    throw new Error("no data rows found");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `row ${i + 2}: expected ${header.length} columns, got ${cells.length}`,
      );
    }
    const row: Row = {};
    header.forEach((h, j) => (row[h] = cells[j].trim()));
    return row;
  });
  return { header, rows };
}

function requireColumns(header: string[], needed: string[], file: string) {
  for (const col of needed) {
    if (!header.includes(col)) {
      throw new Error(`${file}: schema mismatch: missing column '${col}'`);
    }
  }
}

function numeric(row: Row, col: string, file: string): number {
  const raw = row[col];
  const v = Number(raw);
  if (raw === "" || !Number.isFinite(v)) {
    throw new Error(`${file}: column '${col}' has non-numeric value '${raw}'`);
  }
  return v;
}

/** Average delta keyed by an index column over possibly many seeds. */
function collect(
  rows: Row[],
  indexColumn: "rank" | "clock_index",
  file: string,
): number[] {
  const sums = new Map<number, { total: number; n: number }>();
  for (const row of rows) {
    const idx = numeric(row, indexColumn, file);
    const delta = numeric(row, "delta", file);
    const cell = sums.get(idx) ?? { total: 0, n: 0 };
    cell.total += delta;
    cell.n += 1;
    sums.set(idx, cell);
  }
  if (sums.size !== CANDIDATES) {
    throw new Error(
      `${file}: expected ${CANDIDATES} candidate entries per series, ` +
        `got ${sums.size}`,
    );
  }
  const out: number[] = [];
  for (let i = 1; i <= CANDIDATES; i++) {
    const cell = sums.get(i);
    if (!cell) {
      throw new Error(`${file}: missing ${indexColumn} ${i}`);
    }
    out.push(cell.total / cell.n);
  }
  return out;
}

export function parseCsv(text: string, file: string): Series[] {
  const { header, rows } = splitCsv(text);
  if (header.includes("design")) {
    requireColumns(header, ["design", "countermeasures", "rank",
      "clock_index", "delta"], file);
    const blocks = new Map<string, Row[]>();
    for (const row of rows) {
      const arm = row["countermeasures"];
      const label = arm && arm !== "none"
        ? `${row["design"]} + ${arm}`
        : row["design"];
      if (!blocks.has(label)) blocks.set(label, []);
      blocks.get(label)!.push(row);
    }
    return [...blocks.entries()].map(([label, block]) => ({
      label,
      byRank: collect(block, "rank", file),
      byClock: collect(block, "clock_index", file),
    }));
  }
  requireColumns(header, ["rank", "clock_index", "delta"], file);
  const label = basename(file).replace(/\.[^.]+$/, "");
  return [
    {
      label,
      byRank: collect(rows, "rank", file),
      byClock: collect(rows, "clock_index", file),
    },
  ];
}
