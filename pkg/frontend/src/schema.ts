/**
 * Strict reader for the sweep CSV schema.
 *
 * The header must match the emitting CLI exactly; any deviation is reported
 * with the offending column named, and nothing is rendered from a file that
 * fails validation.
 */

export const CSV_HEADER = [
  "sweep",
  "n",
  "d",
  "m",
  "s",
  "eps",
  "trials",
  "failures",
  "fail_rate",
  "ci_low",
  "ci_high",
  "aux_name",
  "aux_value",
  "seed",
] as const;

export interface SweepRow {
  sweep: string;
  n: number;
  d: number;
  m: number;
  s: number;
  eps: number;
  trials: number;
  failures: number;
  fail_rate: number;
  ci_low: number;
  ci_high: number;
  aux_name: string;
  aux_value: number | null;
  /** 64-bit seeds do not fit a JS number; kept verbatim. */
  seed: string;
}

export class SchemaError extends Error {}

const INT_COLUMNS = ["n", "d", "m", "s", "trials", "failures"] as const;
const FLOAT_COLUMNS = ["eps", "fail_rate", "ci_low", "ci_high"] as const;

export function parseCsv(text: string): SweepRow[] {
  const lines = text.split("\n").filter((line, i) => !(line === "" && i > 0));
  if (lines.length === 0 || lines[0] === "") {
    throw new SchemaError("empty file: expected the sweep CSV header");
  }
  const header = lines[0].replace(/\r$/, "").split(",");
  if (header.length !== CSV_HEADER.length) {
    throw new SchemaError(
      `expected ${CSV_HEADER.length} columns, found ${header.length}`,
    );
  }
  for (let i = 0; i < CSV_HEADER.length; i++) {
    if (header[i] !== CSV_HEADER[i]) {
      throw new SchemaError(
        `column ${i + 1} must be '${CSV_HEADER[i]}', found '${header[i]}'`,
      );
    }
  }
  const rows: SweepRow[] = [];
  for (let lineNo = 1; lineNo < lines.length; lineNo++) {
    const parts = lines[lineNo].replace(/\r$/, "").split(",");
    if (parts.length !== CSV_HEADER.length) {
      throw new SchemaError(
        `line ${lineNo + 1}: expected ${CSV_HEADER.length} fields, found ${parts.length}`,
      );
    }
    const raw: Record<string, string> = {};
    CSV_HEADER.forEach((name, i) => (raw[name] = parts[i]));
    const row: SweepRow = {
      sweep: raw.sweep,
      n: parseIntField(raw.n, "n", lineNo),
      d: parseIntField(raw.d, "d", lineNo),
      m: parseIntField(raw.m, "m", lineNo),
      s: parseIntField(raw.s, "s", lineNo),
      eps: parseFloatField(raw.eps, "eps", lineNo),
      trials: parseIntField(raw.trials, "trials", lineNo),
      failures: parseIntField(raw.failures, "failures", lineNo),
      fail_rate: parseFloatField(raw.fail_rate, "fail_rate", lineNo),
      ci_low: parseFloatField(raw.ci_low, "ci_low", lineNo),
      ci_high: parseFloatField(raw.ci_high, "ci_high", lineNo),
      aux_name: raw.aux_name,
      aux_value: raw.aux_value === "" ? null : parseFloatField(raw.aux_value, "aux_value", lineNo),
      seed: raw.seed,
    };
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new SchemaError("no data rows after the header");
  }
  return rows;
}

function parseIntField(text: string, column: string, lineNo: number): number {
  if (!/^-?\d+$/.test(text)) {
    throw new SchemaError(`line ${lineNo + 1}, column '${column}': '${text}' is not an integer`);
  }
  return Number(text);
}

function parseFloatField(text: string, column: string, lineNo: number): number {
  const value = Number(text);
  if (text === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${lineNo + 1}, column '${column}': '${text}' is not a number`);
  }
  return value;
}
