#!/usr/bin/env node
/**
 * render <figure-id> <csv> [--out <path>]
 *
 * Reads one simulator CSV, checks it against the figure schema and writes an
 * SVG.  Exits non-zero with a message on any schema mismatch.
 */

import { writeFileSync } from "fs";

import { readCsv } from "./csv";
import { figureSpec, FIGURES } from "./figures";
import { renderSvg } from "./render";

function usage(): never {
  console.error("usage: render <figure-id> <csv> [--out <path>]");
  console.error(`figure ids: ${Object.keys(FIGURES).join(", ")}`);
  process.exit(2);
}

export function main(argv: string[]): number {
  const args = [...argv];
  if (args[0] === "render") args.shift(); // tolerate the subcommand word
  let out: string | null = null;
  const positional: string[] = [];
  for (let i = 0; i < args.length; i++) {
    if (args[i] === "--out") {
      if (i + 1 >= args.length) usage();
      out = args[++i];
    } else if (args[i].startsWith("-")) {
      usage();
    } else {
      positional.push(args[i]);
    }
  }
  if (positional.length !== 2) usage();
  const [figureId, csvPath] = positional;
  try {
    const spec = figureSpec(figureId);
    const table = readCsv(csvPath);
    const svg = renderSvg(spec, table);
    const target = out ?? `${figureId}.svg`;
    writeFileSync(target, svg, "utf-8");
    console.log(`${figureId}: ${table.rows.length} rows -> ${target}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
