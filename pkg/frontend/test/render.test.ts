import { copyFileSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { inflateSync } from "node:zlib";

import { describe, expect, it } from "vitest";

import { layout } from "../src/chart.js";
import { parseCsv } from "../src/csv.js";
import { parseArgs } from "../src/cli.js";
import { loadSeries, render } from "../src/render.js";

const GOLDEN = join(__dirname, "fixtures", "four_design_sorted.csv");

function tmp(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "plotkit-")), name);
}

function svgBars(svg: string) {
  const bars: { series: number; group: number; value: number; y: number;
                h: number }[] = [];
  const re = /<rect [^>]*data-series="(\d+)" data-group="(\d+)" data-value="([^"]+)"\/>/g;
  for (const m of svg.matchAll(re)) {
    const tag = m[0];
    const attr = (name: string) =>
      Number(new RegExp(`${name}="([-\\d.]+)"`).exec(tag)![1]);
    bars.push({ series: Number(m[1]), group: Number(m[2]),
                value: Number(m[3]), y: attr("y"), h: attr("height") });
  }
  return bars;
}

describe("csv parsing", () => {
  it("splits the golden experiment CSV into four design series", () => {
    const series = parseCsv(readFileSync(GOLDEN, "utf8"), GOLDEN);
    expect(series.map((s) => s.label).sort()).toEqual(
      ["basic", "classical-pm", "classical-rand", "rand-seq"]);
    for (const s of series) {
      expect(s.byRank).toHaveLength(54);
      expect(s.byClock).toHaveLength(54);
    }
  });

  it("reports a missing column by name", () => {
    const bad = "design,countermeasures,seed,rank,clock_index,delta1\n" +
      "basic,none,0,1,1,50\n";
    expect(() => parseCsv(bad, "bad.csv")).toThrow(/missing column 'delta'/);
  });

  it("rejects series that are not 54 candidates long", () => {
    const bad = "rank,clock_index,delta1,delta,candidate_hex\n" +
      "1,5,90,90,ff\n2,6,80,80,fe\n";
    expect(() => parseCsv(bad, "short.csv")).toThrow(/54/);
  });
});

describe("sorted four-design figure", () => {
  it("renders SVG whose bar values equal the CSV deltas exactly", () => {
    const before = readFileSync(GOLDEN);
    const out = tmp("four.svg");
    render({ inputs: [GOLDEN], mode: "sorted", out });
    const after = readFileSync(GOLDEN);
    expect(Buffer.compare(before, after)).toBe(0); // inputs untouched

    const svg = readFileSync(out, "utf8");
    const series = parseCsv(readFileSync(GOLDEN, "utf8"), GOLDEN);
    const bars = svgBars(svg);
    expect(bars).toHaveLength(4 * 54);
    for (const bar of bars) {
      const expected = series[bar.series].byRank![bar.group - 1];
      expect(bar.value).toBe(expected); // no re-normalization
    }
    // sorted input gives monotone non-increasing bars per series
    for (let s = 0; s < 4; s++) {
      const values = bars.filter((b) => b.series === s)
        .sort((a, b) => a.group - b.group).map((b) => b.value);
      for (let i = 1; i < values.length; i++) {
        expect(values[i]).toBeLessThanOrEqual(values[i - 1]);
      }
    }
    // legend carries the design labels
    for (const label of ["basic", "rand-seq", "classical-pm",
                         "classical-rand"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it("maps delta linearly onto bar height with 50 on the reference line", () => {
    const out = tmp("geom.svg");
    render({ inputs: [GOLDEN], mode: "sorted", out });
    const svg = readFileSync(out, "utf8");
    const bars = svgBars(svg);
    const refMatch = /<line [^>]*y1="([\d.]+)"[^>]*data-role="ideal-case"/
      .exec(svg);
    expect(refMatch).not.toBeNull();
    const ref = Number(refMatch![1]);
    for (const bar of bars) {
      // bottom of every bar sits on the 50% line; height is value-linear
      expect(Math.abs(bar.y + bar.h - ref)).toBeLessThan(0.02);
      const geomValue = 50 + (bar.h / 320) * 50;
      expect(Math.abs(geomValue - Math.min(100, bar.value))).toBeLessThan(0.02);
    }
  });
});

describe("per-clock mode", () => {
  it("orders one report by clock index", () => {
    const series = parseCsv(readFileSync(GOLDEN, "utf8"), GOLDEN);
    const basic = series.find((s) => s.label === "basic")!;
    const out = tmp("clock.svg");
    render({ inputs: [GOLDEN], mode: "per-clock", out });
    const bars = svgBars(readFileSync(out, "utf8"))
      .filter((b) => b.series === series.indexOf(basic))
      .sort((a, b) => a.group - b.group);
    expect(bars.map((b) => b.value)).toEqual(basic.byClock);
  });

  it("errors when a delta cell is empty (unscored report)", () => {
    const path = tmp("unscored.csv");
    const rows = ["rank,clock_index,delta1,delta,candidate_hex"];
    for (let i = 1; i <= 54; i++) rows.push(`${i},${i},,,ff`);
    writeFileSync(path, rows.join("\n") + "\n");
    expect(() => loadSeries({ inputs: [path], mode: "sorted", out: "x.svg" }))
      .toThrow(/column 'delta'/);
  });
});

describe("png output", () => {
  it("writes a valid PNG with the expected dimensions", () => {
    const out = tmp("four.png");
    render({ inputs: [GOLDEN], mode: "sorted", out });
    const png = readFileSync(out);
    expect([...png.subarray(0, 8)]).toEqual(
      [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    expect(png.subarray(12, 16).toString("ascii")).toBe("IHDR");
    const width = png.readUInt32BE(16);
    const height = png.readUInt32BE(20);
    const series = parseCsv(readFileSync(GOLDEN, "utf8"), GOLDEN);
    const geom = layout(series, "sorted");
    expect(width).toBe(geom.width);
    expect(height).toBe(geom.height);
    // IDAT inflates to (4*width + 1) bytes per scanline
    const idatStart = png.indexOf("IDAT") + 4;
    const idatLen = png.readUInt32BE(png.indexOf("IDAT") - 4);
    const raw = inflateSync(png.subarray(idatStart, idatStart + idatLen));
    expect(raw.length).toBe((4 * width + 1) * height);
  });
});

describe("cli argument parsing", () => {
  it("accepts the documented flag set", () => {
    const spec = parseArgs(["render", "--mode", "sorted", "--in", "a.csv",
                            "--in", "b.csv", "--label", "one", "--out",
                            "fig.png"]);
    expect(spec.mode).toBe("sorted");
    expect(spec.inputs).toEqual(["a.csv", "b.csv"]);
    expect(spec.labels).toEqual(["one"]);
    expect(spec.out).toBe("fig.png");
  });

  it("copies survive round trips through rendering twice", () => {
    const first = tmp("a.svg");
    const second = tmp("b.svg");
    render({ inputs: [GOLDEN], mode: "sorted", out: first });
    render({ inputs: [GOLDEN], mode: "sorted", out: second });
    expect(readFileSync(first, "utf8")).toBe(readFileSync(second, "utf8"));
  });
});
