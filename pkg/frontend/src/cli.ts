/**
 * plotkit render --mode {per-clock|sorted} --in <csv>... --out <image>
 *
 * Renders kpsim experiment or attack-report CSVs as grouped bar charts;
 * the output format follows the file extension (.png or .svg).
 */

import { render, type FigureSpec } from "./render.js";
import type { Mode } from "./chart.js";

function usage(message?: string): never {
  if (message) console.error(`error: ${message}`);
  console.error(
    "usage: plotkit render --mode {per-clock|sorted} --in <csv>... " +
      "[--label <text>...] --out <image.png|image.svg>",
  );
  process.exit(message ? 1 : 0);
}

export function parseArgs(argv: string[]): FigureSpec {
  if (argv[0] !== "render") usage(`unknown command '${argv[0] ?? ""}'`);
  let mode: string | undefined;
  let out: string | undefined;
  const inputs: string[] = [];
  const labels: string[] = [];
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) usage(`missing value for ${arg}`);
      return argv[++i];
    };
    if (arg === "--mode") mode = next();
    else if (arg === "--in") inputs.push(next());
    else if (arg === "--label") labels.push(next());
    else if (arg === "--out") out = next();
    else if (arg === "--help" || arg === "-h") usage();
    else usage(`unknown argument '${arg}'`);
  }
  if (!mode || (mode !== "per-clock" && mode !== "sorted")) {
    usage("--mode must be per-clock or sorted");
  }
  if (inputs.length === 0) usage("at least one --in CSV is required");
  if (!out) usage("--out is required");
  return { inputs, mode: mode as Mode, out,
           labels: labels.length ? labels : undefined };
}

export function main(argv: string[]): number {
  try {
    render(parseArgs(argv));
    console.log(`wrote ${argv[argv.indexOf("--out") + 1]}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

if (process.argv[1] && /cli\.(js|ts)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
