/**
 * Hand-rolled SVG rendering for the three figure kinds.
 *
 * Output is a pure function of the figure model (no timestamps, no
 * randomness), and the model itself is embedded in a <metadata> block so the
 * plotted series can be recovered from the image file.
 */

import {
  FigureModel,
  FrontierModel,
  HeatmapModel,
  LemmaTableModel,
} from "./model.js";

export interface AxisOptions {
  logX?: boolean;
  logY?: boolean;
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 170, top: 40, bottom: 55 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f3722c",
  "#7209b7",
  "#0096c7",
  "#d90429",
  "#6a994e",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function fmt(x: number): string {
  return x.toFixed(2);
}

function svgShell(body: string, model: FigureModel, title: string): string {
  const meta = esc(JSON.stringify(model));
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">\n` +
    `<metadata id="figure-model">${meta}</metadata>\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(title)}</text>\n` +
    body +
    "</svg>\n"
  );
}

interface Scale {
  (value: number): number;
  ticks: number[];
}

function makeScale(values: number[], pixelLo: number, pixelHi: number, log: boolean): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (log) {
    lo = Math.log10(Math.max(lo, 1e-12));
    hi = Math.log10(Math.max(hi, 1e-12));
  }
  if (hi === lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const span = hi - lo;
  const scale = ((value: number) => {
    const v = log ? Math.log10(Math.max(value, 1e-12)) : value;
    return pixelLo + ((v - lo) / span) * (pixelHi - pixelLo);
  }) as Scale;
  const tickCount = 6;
  scale.ticks = Array.from({ length: tickCount }, (_, i) => {
    const v = lo + (span * i) / (tickCount - 1);
    return log ? 10 ** v : v;
  });
  return scale;
}

function axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string): string {
  const x0 = MARGIN.left;
  const x1 = MARGIN.left + PLOT_W;
  const y0 = MARGIN.top + PLOT_H;
  const y1 = MARGIN.top;
  let out = `<g stroke="#222" fill="none"><path d="M${x0} ${y1} L${x0} ${y0} L${x1} ${y0}"/></g>\n`;
  out += `<g font-size="11" fill="#222">\n`;
  for (const t of xScale.ticks) {
    const px = xScale(t);
    out += `<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 4}" stroke="#222"/>`;
    out += `<text x="${fmt(px)}" y="${y0 + 18}" text-anchor="middle">${esc(shortNum(t))}</text>\n`;
  }
  for (const t of yScale.ticks) {
    const py = yScale(t);
    out += `<line x1="${x0 - 4}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#222"/>`;
    out += `<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end">${esc(shortNum(t))}</text>\n`;
  }
  out += `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">${esc(xLabel)}</text>\n`;
  out += `<text x="18" y="${(y0 + y1) / 2}" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})" text-anchor="middle">${esc(yLabel)}</text>\n`;
  out += `</g>\n`;
  return out;
}

function shortNum(x: number): string {
  if (x !== 0 && (Math.abs(x) >= 10000 || Math.abs(x) < 0.001)) {
    return x.toExponential(1);
  }
  return Number(x.toFixed(3)).toString();
}

export function renderFrontier(model: FrontierModel, opts: AxisOptions = {}): string {
  const ms = model.curves.flatMap((c) => c.points.map((p) => p.m));
  const xScale = makeScale(ms, MARGIN.left, MARGIN.left + PLOT_W, opts.logX ?? false);
  const yScale = makeScale([0, 1], MARGIN.top + PLOT_H, MARGIN.top, opts.logY ?? false);
  let body = axes(xScale, yScale, "sketch rows m", "failure rate");
  const legend: string[] = [];
  model.curves.forEach((curve, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const pts = curve.points;
    if (pts.length > 1) {
      const band =
        pts.map((p) => `${fmt(xScale(p.m))},${fmt(yScale(p.ciHigh))}`).join(" ") +
        " " +
        [...pts].reverse().map((p) => `${fmt(xScale(p.m))},${fmt(yScale(p.ciLow))}`).join(" ");
      body += `<polygon points="${band}" fill="${color}" opacity="0.15"/>\n`;
      const line = pts.map((p) => `${fmt(xScale(p.m))},${fmt(yScale(p.failRate))}`).join(" ");
      body += `<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.6"/>\n`;
    }
    for (const p of pts) {
      body += `<circle cx="${fmt(xScale(p.m))}" cy="${fmt(yScale(p.failRate))}" r="3" fill="${color}"/>\n`;
    }
    legend.push(`d=${curve.d}, eps=${curve.eps}`);
  });
  legend.forEach((label, idx) => {
    const y = MARGIN.top + 14 + idx * 18;
    const x = MARGIN.left + PLOT_W + 12;
    body += `<rect x="${x}" y="${y - 9}" width="12" height="12" fill="${PALETTE[idx % PALETTE.length]}"/>`;
    body += `<text x="${x + 18}" y="${y + 1}" font-size="12">${esc(label)}</text>\n`;
  });
  return svgShell(body, model, "Failure rate vs sketch size");
}

function heatColor(rate: number): string {
  // white (0) to deep red (1)
  const clamped = Math.min(Math.max(rate, 0), 1);
  const r = 255;
  const g = Math.round(245 * (1 - clamped));
  const b = Math.round(240 * (1 - clamped));
  return `rgb(${r},${g},${b})`;
}

export function renderHeatmap(model: HeatmapModel): string {
  const { mValues, sValues } = model;
  const cellW = PLOT_W / mValues.length;
  const cellH = PLOT_H / sValues.length;
  const xIndex = new Map(mValues.map((m, i) => [m, i]));
  const yIndex = new Map(sValues.map((s, i) => [s, i]));
  let body = "";
  for (const cell of model.cells) {
    const x = MARGIN.left + xIndex.get(cell.m)! * cellW;
    // lowest s at the bottom
    const y = MARGIN.top + (sValues.length - 1 - yIndex.get(cell.s)!) * cellH;
    body += `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(cellW)}" height="${fmt(cellH)}" ` +
      `fill="${heatColor(cell.failRate)}" stroke="#999" stroke-width="0.5"/>\n`;
    body += `<text x="${fmt(x + cellW / 2)}" y="${fmt(y + cellH / 2 + 4)}" text-anchor="middle" ` +
      `font-size="11">${esc(cell.failRate.toFixed(2))}</text>\n`;
  }
  body += `<g font-size="12" fill="#222">\n`;
  mValues.forEach((m, i) => {
    const x = MARGIN.left + i * cellW + cellW / 2;
    body += `<text x="${fmt(x)}" y="${MARGIN.top + PLOT_H + 18}" text-anchor="middle">${esc(shortNum(m))}</text>\n`;
  });
  sValues.forEach((s, i) => {
    const y = MARGIN.top + (sValues.length - 1 - i) * cellH + cellH / 2 + 4;
    body += `<text x="${MARGIN.left - 8}" y="${fmt(y)}" text-anchor="end">${esc(String(s))}</text>\n`;
  });
  body += `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">sketch rows m</text>\n`;
  body += `<text x="18" y="${MARGIN.top + PLOT_H / 2}" font-size="13" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})" text-anchor="middle">nonzeros per column s</text>\n`;
  body += `</g>\n`;
  return svgShell(body, model, "Failure-rate phase diagram");
}

export function renderLemmaTable(model: LemmaTableModel): string {
  const rowH = 26;
  const cols = [
    { label: "lemma", x: MARGIN.left },
    { label: "statistic", x: MARGIN.left + 260 },
    { label: "checks", x: MARGIN.left + 390 },
    { label: "violations", x: MARGIN.left + 470 },
    { label: "verdict", x: MARGIN.left + 570 },
  ];
  let body = `<g font-size="13">\n`;
  cols.forEach((c) => {
    body += `<text x="${c.x}" y="${MARGIN.top + 16}" font-weight="bold">${esc(c.label)}</text>\n`;
  });
  model.rows.forEach((row, i) => {
    const y = MARGIN.top + 16 + (i + 1) * rowH;
    const stat = row.statistic === null ? "-" : shortNum(row.statistic);
    const verdict = row.passed ? "pass" : "FAIL";
    const color = row.passed ? "#2d6a4f" : "#d90429";
    body += `<text x="${cols[0].x}" y="${y}">${esc(row.name)}</text>`;
    body += `<text x="${cols[1].x}" y="${y}">${esc(stat)}</text>`;
    body += `<text x="${cols[2].x}" y="${y}">${row.checks}</text>`;
    body += `<text x="${cols[3].x}" y="${y}">${row.violations}</text>`;
    body += `<text x="${cols[4].x}" y="${y}" fill="${color}" font-weight="bold">${esc(verdict)}</text>\n`;
  });
  body += `</g>\n`;
  return svgShell(body, model, "Lemma suite verdicts");
}

export function renderModel(model: FigureModel, opts: AxisOptions = {}): string {
  switch (model.kind) {
    case "frontier-curves":
      return renderFrontier(model, opts);
    case "phase-heatmap":
      return renderHeatmap(model);
    case "lemma-table":
      return renderLemmaTable(model);
  }
}
