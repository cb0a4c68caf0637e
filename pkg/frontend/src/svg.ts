/** SVG backend: geometry to a standalone SVG document. */

import type { Geometry } from "./chart.js";
import { PALETTE } from "./chart.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const fmt = (v: number) => {
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
};

export function renderSvg(geom: Geometry): string {
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${geom.width}" ` +
      `height="${geom.height}" viewBox="0 0 ${geom.width} ${geom.height}">`,
  );
  out.push(`<rect width="${geom.width}" height="${geom.height}" fill="#ffffff"/>`);

  const { plot } = geom;
  for (const t of geom.yTicks) {
    out.push(
      `<line x1="${plot.x}" y1="${fmt(t.pos)}" x2="${plot.x + plot.w}" ` +
        `y2="${fmt(t.pos)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${plot.x - 8}" y="${fmt(t.pos + 4)}" text-anchor="end" ` +
        `font-family="sans-serif" font-size="12">${t.label}</text>`,
    );
  }
  for (const t of geom.xTicks) {
    out.push(
      `<text x="${fmt(t.pos)}" y="${plot.y + plot.h + 16}" ` +
        `text-anchor="middle" font-family="sans-serif" font-size="11">` +
        `${t.label}</text>`,
    );
  }

  for (const bar of geom.bars) {
    out.push(
      `<rect x="${fmt(bar.x)}" y="${fmt(bar.y)}" width="${bar.w}" ` +
        `height="${fmt(bar.h)}" fill="${PALETTE[bar.series % PALETTE.length]}" ` +
        `data-series="${bar.series}" data-group="${bar.group}" ` +
        `data-value="${bar.value}"/>`,
    );
  }

  // ideal-case reference line at 50 percent
  out.push(
    `<line x1="${plot.x}" y1="${fmt(geom.refLineY)}" x2="${plot.x + plot.w}" ` +
      `y2="${fmt(geom.refLineY)}" stroke="#1f4fd8" stroke-width="2" ` +
      `data-role="ideal-case"/>`,
  );
  out.push(
    `<rect x="${plot.x}" y="${plot.y}" width="${plot.w}" height="${plot.h}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`,
  );

  let lx = plot.x + 8;
  for (const item of geom.legend) {
    out.push(
      `<rect x="${lx}" y="${plot.y - 24}" width="12" height="12" ` +
        `fill="${item.color}"/>`,
    );
    out.push(
      `<text x="${lx + 16}" y="${plot.y - 14}" font-family="sans-serif" ` +
        `font-size="12">${esc(item.label)}</text>`,
    );
    lx += 16 + 8 * item.label.length + 24;
  }

  out.push(
    `<text x="${plot.x + plot.w / 2}" y="${geom.height - 8}" ` +
      `text-anchor="middle" font-family="sans-serif" font-size="12">` +
      `${esc(geom.xAxisTitle)}</text>`,
  );
  out.push(
    `<text x="14" y="${plot.y + plot.h / 2}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="12" ` +
      `transform="rotate(-90 14 ${plot.y + plot.h / 2})">` +
      `${esc(geom.yAxisTitle)}</text>`,
  );
  out.push("</svg>");
  return out.join("\n") + "\n";
}
