#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FigureKind, KINDS, render } from "./render.js";

const argv = yargs(hideBin(process.argv))
  .scriptName("leobeam-render")
  .usage("$0 --kind <figure> --in <csv> --out <svg>")
  .option("kind", {
    choices: KINDS,
    demandOption: true,
    describe: "figure to render",
  })
  .option("in", {
    type: "string",
    demandOption: true,
    describe: "input CSV produced by the simulator CLI",
  })
  .option("out", {
    type: "string",
    demandOption: true,
    describe: "output SVG path",
  })
  .option("column", {
    type: "string",
    describe: "value column for heatmap/cuts (default snr_db)",
  })
  .strict()
  .parseSync();

try {
  render({
    kind: argv.kind as FigureKind,
    input: argv.in,
    output: argv.out,
    column: argv.column,
  });
  console.log(`${argv.kind}: ${argv.in} -> ${argv.out}`);
} catch (err) {
  console.error(`error: ${(err as Error).message}`);
  process.exit(1);
}
