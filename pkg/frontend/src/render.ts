/** Figure rendering: CSV inputs to an SVG or PNG file, by extension. */

import { readFileSync, writeFileSync } from "node:fs";
import { extname } from "node:path";

import { layout, type Mode } from "./chart.js";
import { parseCsv, type Series } from "./csv.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export interface FigureSpec {
  inputs: string[];
  mode: Mode;
  out: string;
  /** optional overrides, applied to the flattened series in order */
  labels?: string[];
}

export function loadSeries(spec: FigureSpec): Series[] {
  const series: Series[] = [];
  for (const file of spec.inputs) {
    series.push(...parseCsv(readFileSync(file, "utf8"), file));
  }
  if (spec.labels) {
    spec.labels.forEach((label, i) => {
      if (i < series.length) series[i] = { ...series[i], label };
    });
  }
  return series;
}

export function render(spec: FigureSpec): void {
  if (spec.mode !== "sorted" && spec.mode !== "per-clock") {
    throw new Error(`unknown mode '${spec.mode}'`);
  }
  const geom = layout(loadSeries(spec), spec.mode);
  const ext = extname(spec.out).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(spec.out, renderSvg(geom));
  } else if (ext === ".png") {
    writeFileSync(spec.out, renderPng(geom));
  } else {
    throw new Error(`unsupported output extension '${ext}' (use .png or .svg)`);
  }
}
