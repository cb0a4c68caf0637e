/**
 * Chart geometry shared by the SVG and PNG backends.
 *
 * Grouped bars, one group per candidate index (1..54), one bar per series;
 * the y axis is clamped to [50, 100] with the ideal-case reference line at
 * 50; bar heights map delta values linearly with no re-normalization, so a
 * candidate at delta = 50 produces a zero-height bar sitting on the line.
 */

import type { Series } from "./csv.js";
import { CANDIDATES } from "./csv.js";

export type Mode = "per-clock" | "sorted";

export const PALETTE = [
  "#2D5FBE", // blue
  "#3FA34D", // green
  "#E3B23C", // yellow
  "#26201D", // near-black
  "#8E44AD",
  "#C0392B",
  "#16A085",
  "#7F8C8D",
];

export interface Bar {
  x: number;
  y: number;
  w: number;
  h: number;
  value: number;
  series: number;
  group: number; // candidate index, 1-based
}

export interface Tick {
  pos: number;
  label: string;
}

export interface Geometry {
  width: number;
  height: number;
  plot: { x: number; y: number; w: number; h: number };
  bars: Bar[];
  refLineY: number;
  yTicks: Tick[];
  xTicks: Tick[];
  legend: { label: string; color: string }[];
  xAxisTitle: string;
  yAxisTitle: string;
}

export const Y_MIN = 50;
export const Y_MAX = 100;

export function seriesValues(series: Series, mode: Mode): number[] {
  const values = mode === "sorted" ? series.byRank : series.byClock;
  if (!values) {
    throw new Error(
      `series '${series.label}' lacks the ${
        mode === "sorted" ? "rank" : "clock_index"
      } column required by ${mode} mode`,
    );
  }
  return values;
}

export function layout(seriesList: Series[], mode: Mode): Geometry {
  if (seriesList.length === 0) {
    throw new Error("nothing to plot");
  }
  const perSeries = seriesList.map((s) => seriesValues(s, mode));

  const margin = { left: 56, right: 16, top: 40, bottom: 42 };
  const barW = seriesList.length > 2 ? 3 : 6;
  const groupGap = 4;
  const groupW = barW * seriesList.length + groupGap;
  const plotW = groupW * CANDIDATES;
  const plotH = 320;
  const width = margin.left + plotW + margin.right;
  const height = margin.top + plotH + margin.bottom;
  const plot = { x: margin.left, y: margin.top, w: plotW, h: plotH };

  const yOf = (v: number) => {
    const clamped = Math.min(Y_MAX, Math.max(Y_MIN, v));
    return plot.y + plot.h - ((clamped - Y_MIN) / (Y_MAX - Y_MIN)) * plot.h;
  };

  const bars: Bar[] = [];
  perSeries.forEach((values, s) => {
    values.forEach((value, g) => {
      const x = plot.x + g * groupW + s * barW;
      const y = yOf(value);
      bars.push({
        x,
        y,
        w: barW,
        h: plot.y + plot.h - y,
        value,
        series: s,
        group: g + 1,
      });
    });
  });

  const yTicks: Tick[] = [];
  for (let v = Y_MIN; v <= Y_MAX; v += 10) {
    yTicks.push({ pos: yOf(v), label: String(v) });
  }
  const xTicks: Tick[] = [];
  for (let g = 1; g <= CANDIDATES; g += g === 1 ? 4 : 5) {
    xTicks.push({
      pos: plot.x + (g - 1) * groupW + (groupW - groupGap) / 2,
      label: String(g),
    });
  }

  return {
    width,
    height,
    plot,
    bars,
    refLineY: yOf(50),
    yTicks,
    xTicks,
    legend: seriesList.map((s, i) => ({
      label: s.label,
      color: PALETTE[i % PALETTE.length],
    })),
    xAxisTitle: mode === "sorted" ? "candidate (sorted by correctness)"
      : "clock cycle within slot",
    yAxisTitle: "correctness, %",
  };
}
