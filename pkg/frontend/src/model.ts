/**
 * Figure models: the data actually bound to each plot.
 *
 * Rendering works off these structures and embeds them verbatim in the SVG
 * output, so tests (and downstream tooling) verify the plotted series against
 * the CSV without touching pixels.
 */

import { SchemaError, SweepRow } from "./schema.js";

export type PlotKind = "frontier-curves" | "phase-heatmap" | "lemma-table";

export interface FrontierPoint {
  m: number;
  failRate: number;
  ciLow: number;
  ciHigh: number;
}

export interface FrontierCurve {
  d: number;
  eps: number;
  points: FrontierPoint[];
}

export interface FrontierModel {
  kind: "frontier-curves";
  curves: FrontierCurve[];
}

export interface HeatmapCell {
  m: number;
  s: number;
  failRate: number;
}

export interface HeatmapModel {
  kind: "phase-heatmap";
  mValues: number[];
  sValues: number[];
  cells: HeatmapCell[];
}

export interface LemmaRow {
  name: string;
  statistic: number | null;
  checks: number;
  violations: number;
  passed: boolean;
}

export interface LemmaTableModel {
  kind: "lemma-table";
  rows: LemmaRow[];
}

export type FigureModel = FrontierModel | HeatmapModel | LemmaTableModel;

export function buildModel(kind: PlotKind, rows: SweepRow[]): FigureModel {
  switch (kind) {
    case "frontier-curves":
      return buildFrontier(rows);
    case "phase-heatmap":
      return buildHeatmap(rows);
    case "lemma-table":
      return buildLemmaTable(rows);
  }
}

function buildFrontier(rows: SweepRow[]): FrontierModel {
  const groups = new Map<string, FrontierCurve>();
  for (const row of rows) {
    const key = `${row.d}|${row.eps}`;
    let curve = groups.get(key);
    if (!curve) {
      curve = { d: row.d, eps: row.eps, points: [] };
      groups.set(key, curve);
    }
    if (!curve.points.some((p) => p.m === row.m)) {
      curve.points.push({
        m: row.m,
        failRate: row.fail_rate,
        ciLow: row.ci_low,
        ciHigh: row.ci_high,
      });
    }
  }
  const curves = [...groups.values()];
  curves.sort((a, b) => a.d - b.d || a.eps - b.eps);
  for (const curve of curves) {
    curve.points.sort((a, b) => a.m - b.m);
  }
  return { kind: "frontier-curves", curves };
}

function buildHeatmap(rows: SweepRow[]): HeatmapModel {
  const seen = new Map<string, HeatmapCell>();
  for (const row of rows) {
    const key = `${row.m}|${row.s}`;
    if (!seen.has(key)) {
      seen.set(key, { m: row.m, s: row.s, failRate: row.fail_rate });
    }
  }
  const cells = [...seen.values()];
  cells.sort((a, b) => a.s - b.s || a.m - b.m);
  const mValues = [...new Set(cells.map((c) => c.m))].sort((a, b) => a - b);
  const sValues = [...new Set(cells.map((c) => c.s))].sort((a, b) => a - b);
  return { kind: "phase-heatmap", mValues, sValues, cells };
}

function buildLemmaTable(rows: SweepRow[]): LemmaTableModel {
  const out: LemmaRow[] = [];
  for (const row of rows) {
    if (row.aux_name === "") {
      throw new SchemaError("lemma-table needs the lemma name in column 'aux_name'");
    }
    out.push({
      name: row.aux_name,
      statistic: row.aux_value,
      checks: row.trials,
      violations: row.failures,
      passed: row.failures === 0,
    });
  }
  return { kind: "lemma-table", rows: out };
}
