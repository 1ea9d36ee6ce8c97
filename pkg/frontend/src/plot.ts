#!/usr/bin/env node
/**
 * Render experiment CSV outputs as SVG figures.
 *
 *   plot reward --in <dir> --out <path.svg>
 *   plot counts --in <dir> --out <path.svg> [--arms i,j] [--file counts_decoupled.csv]
 *
 * `--in` is a directory produced by the experiment runner; the reward
 * figure reads reward_curves.csv (+ env.meta.json for switch markers) and
 * the counts figure reads a counts_<label>.csv (default
 * counts_decoupled.csv).  Exits 0 on success, 1 on schema/usage errors
 * with a diagnostic on stderr.  This tool renders what the files contain;
 * it never recomputes statistics.
 */

import { writeFileSync } from "fs";
import { join } from "path";
import { parseArgs } from "util";

import { SchemaError } from "./csv";
import { renderCounts } from "./counts";
import { loadMeta } from "./meta";
import { renderReward } from "./reward";

const USAGE =
  "usage: plot <reward|counts> --in <dir> --out <path.svg> [--arms i,j] [--file name.csv]";

export function runCli(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        arms: { type: "string", default: "0,1" },
        file: { type: "string", default: "counts_decoupled.csv" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}\n${USAGE}`);
    return 1;
  }
  const [figure] = parsed.positionals;
  const { in: inDir, out, arms, file } = parsed.values;
  if (!figure || !["reward", "counts"].includes(figure) || !inDir || !out) {
    console.error(USAGE);
    return 1;
  }

  try {
    const meta = loadMeta(inDir);
    let svg: string;
    if (figure === "reward") {
      svg = renderReward(join(inDir, "reward_curves.csv"), meta);
    } else {
      const armList = (arms as string).split(",").map((s) => Number(s.trim()));
      if (armList.length === 0 || armList.some((a) => !Number.isInteger(a))) {
        console.error(`error: --arms expects a comma-separated list of arm indices, got "${arms}"`);
        return 1;
      }
      svg = renderCounts(join(inDir, file as string), armList, meta);
    }
    writeFileSync(out as string, svg);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).stack ?? err}`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
