#!/usr/bin/env node
import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { readRuinCurvesCsv } from "./csv.js";
import { Vec } from "./geometry.js";
import { renderConeDiagram } from "./coneDiagram.js";
import { renderFeasibleRegion } from "./feasibleRegion.js";
import { renderRuinCurves } from "./ruinCurves.js";

export type FigureKind = "ruin-curves" | "cone-diagram" | "feasible-region";

export interface RenderArgs {
  kind: FigureKind;
  in?: string;
  out: string;
  q12?: number;
  q21?: number;
  y?: string;
  jump?: string;
  title?: string;
}

function parsePair(textValue: string, name: string): Vec {
  const parts = textValue.split(",").map(Number);
  if (parts.length !== 2 || parts.some((v) => !Number.isFinite(v))) {
    throw new Error(`${name} must be two comma-separated numbers, got "${textValue}"`);
  }
  return [parts[0], parts[1]];
}

/** Build the requested figure and return its SVG source. */
export function renderFigure(args: RenderArgs): string {
  if (args.kind === "ruin-curves") {
    if (!args.in) throw new Error("--in <csv> is required for ruin-curves");
    const table = readRuinCurvesCsv(args.in);
    return renderRuinCurves(table, args.title ?? "Ruin probabilities");
  }
  if (args.q12 === undefined || args.q21 === undefined || args.y === undefined) {
    throw new Error(`--q12, --q21 and --y are required for ${args.kind}`);
  }
  if (args.q12 < 0 || args.q21 < 0) {
    throw new Error("q12 and q21 must be non-negative");
  }
  const y = parsePair(args.y, "--y");
  if (args.kind === "cone-diagram") {
    return renderConeDiagram(args.q12, args.q21, y, args.title ?? "Continuability cone");
  }
  const jump = args.jump === undefined ? undefined : parsePair(args.jump, "--jump");
  return renderFeasibleRegion(
    args.q12,
    args.q21,
    y,
    jump,
    args.title ?? "Feasible reflection jumps",
  );
}

/** Write the figure to ``out``; .svg stays vector, .png is rasterized. */
export async function writeFigure(args: RenderArgs): Promise<void> {
  const svg = renderFigure(args);
  if (args.out.toLowerCase().endsWith(".png")) {
    const { Resvg } = await import("@resvg/resvg-js");
    writeFileSync(args.out, new Resvg(svg).render().asPng());
  } else {
    writeFileSync(args.out, svg, "utf-8");
  }
}

/** Merge vector-valued flags with their argument so "--y -1,6" survives
 * yargs, which would otherwise read "-1,6" as an option. */
export function mergeVectorFlags(argv: string[]): string[] {
  const out: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const token = argv[i];
    if ((token === "--y" || token === "--jump") && i + 1 < argv.length) {
      out.push(`${token}=${argv[i + 1]}`);
      i += 1;
    } else {
      out.push(token);
    }
  }
  return out;
}

export async function main(rawArgv: string[]): Promise<number> {
  const argv = mergeVectorFlags(rawArgv);
  const parser = yargs(argv)
    .command(
      ["render", "$0"],
      "render a figure from minreflect outputs",
      (cmd) =>
        cmd
          .option("kind", {
            choices: ["ruin-curves", "cone-diagram", "feasible-region"] as const,
            demandOption: true,
          })
          .option("in", { type: "string", describe: "ruin-curves CSV input" })
          .option("out", { type: "string", demandOption: true, describe: "output .svg or .png" })
          .option("q12", { type: "number" })
          .option("q21", { type: "number" })
          .option("y", { type: "string", describe: "tested state, e.g. -1,6" })
          .option("jump", { type: "string", describe: "minimal jump to mark, e.g. 1,0" })
          .option("title", { type: "string" }),
      () => undefined,
    )
    .strict()
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    });
  try {
    const args = (await parser.parse()) as unknown as RenderArgs;
    await writeFigure(args);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
