#!/usr/bin/env node
/**
 * plot_kit <kind> --in <file> [--in <file> ...] --out <svg>
 *               [--lambda-nm N] [--floor F]
 *
 * kinds: surface3d | pm_slice | farfield | eigencurves | witness_decay
 *
 * pm_slice takes the surface CSVs plus (optionally, last --in) the cluster
 * JSON; rendering is read-only and deterministic.  Schema mismatches exit
 * nonzero naming the offending column.
 */

import { writeFileSync } from "node:fs";

import { SchemaError } from "./table.js";
import { renderSurface3d } from "./kinds/surface3d.js";
import { renderPmSlice } from "./kinds/pmSlice.js";
import { renderFarfield } from "./kinds/farfield.js";
import { renderEigencurves } from "./kinds/eigencurves.js";
import { renderWitnessDecay } from "./kinds/witnessDecay.js";

interface Args {
  kind: string;
  inputs: string[];
  out: string;
  lambdaNm?: number;
  floor?: number;
}

const KINDS = ["surface3d", "pm_slice", "farfield", "eigencurves", "witness_decay"];

function parseArgs(argv: string[]): Args {
  if (argv.length < 1 || !KINDS.includes(argv[0])) {
    throw new Error(`usage: plot_kit <${KINDS.join("|")}> --in <file> --out <svg>`);
  }
  const args: Args = { kind: argv[0], inputs: [], out: "" };
  for (let i = 1; i < argv.length; i++) {
    switch (argv[i]) {
      case "--in":
        args.inputs.push(argv[++i]);
        break;
      case "--out":
        args.out = argv[++i];
        break;
      case "--lambda-nm":
        args.lambdaNm = Number(argv[++i]);
        break;
      case "--floor":
        args.floor = Number(argv[++i]);
        break;
      default:
        throw new Error(`unknown argument: ${argv[i]}`);
    }
  }
  if (args.inputs.length === 0 || !args.out) {
    throw new Error("need at least one --in and an --out path");
  }
  return args;
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    let svg: string;
    switch (args.kind) {
      case "surface3d":
        svg = renderSurface3d(args.inputs);
        break;
      case "pm_slice": {
        const clusterPath = args.inputs.find((p) => p.endsWith(".json"));
        const surfaces = args.inputs.filter((p) => !p.endsWith(".json"));
        svg = renderPmSlice(surfaces, clusterPath, { lambdaNm: args.lambdaNm });
        break;
      }
      case "farfield": {
        const res = renderFarfield(args.inputs[0], { floor: args.floor });
        svg = res.svg;
        break;
      }
      case "eigencurves":
        svg = renderEigencurves(args.inputs[0]);
        break;
      default:
        svg = renderWitnessDecay(args.inputs[0]);
    }
    writeFileSync(args.out, svg);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 3;
    }
    console.error((err as Error).message);
    return 1;
  }
}

import { fileURLToPath } from "node:url";
import { resolve } from "node:path";

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  process.exit(run(process.argv.slice(2)));
}
