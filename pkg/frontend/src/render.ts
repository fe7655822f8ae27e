/**
 * Orchestration: CSV file in, figure model + SVG file out.
 *
 * Validation and model building happen before the output path is touched, so
 * a bad input never leaves a partial image behind.
 */

import { readFileSync, writeFileSync } from "fs";

import { buildModel, FigureModel, PlotKind } from "./model.js";
import { parseCsv } from "./schema.js";
import { AxisOptions, renderModel } from "./svg.js";

export interface PlotRequest {
  input: string;
  kind: PlotKind;
  output: string;
  logX?: boolean;
  logY?: boolean;
}

export interface RenderResult {
  model: FigureModel;
  svg: string;
}

/** Pure core: CSV text to model + SVG string. */
export function renderText(text: string, kind: PlotKind, opts: AxisOptions = {}): RenderResult {
  const rows = parseCsv(text);
  const model = buildModel(kind, rows);
  return { model, svg: renderModel(model, opts) };
}

export function render(request: PlotRequest): RenderResult {
  const text = readFileSync(request.input, "utf-8");
  const result = renderText(text, request.kind, {
    logX: request.logX,
    logY: request.logY,
  });
  writeFileSync(request.output, result.svg, "utf-8");
  return result;
}

/** Pull the embedded figure model back out of a rendered SVG. */
export function modelFromSvg(svg: string): FigureModel {
  const match = svg.match(/<metadata id="figure-model">([\s\S]*?)<\/metadata>/);
  if (!match) {
    throw new Error("no embedded figure model found in the SVG");
  }
  const json = match[1]
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(json) as FigureModel;
}
