#!/usr/bin/env node
/**
 * oselab-plots render --in <csv> --kind <kind> --out <img> [--log-x] [--log-y]
 *
 * Kinds: frontier-curves | phase-heatmap | lemma-table. Exit 0 on success,
 * 1 on usage errors, missing/invalid input, or write failures; nothing is
 * written unless the input validated.
 */

import { PlotKind } from "./model.js";
import { render } from "./render.js";

const KINDS: PlotKind[] = ["frontier-curves", "phase-heatmap", "lemma-table"];

function usage(): string {
  return "usage: render --in <csv> --kind <frontier-curves|phase-heatmap|lemma-table> --out <img> [--log-x] [--log-y]";
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(usage());
    return 1;
  }
  const flags = new Map<string, string>();
  let logX = false;
  let logY = false;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--log-x") {
      logX = true;
    } else if (arg === "--log-y") {
      logY = true;
    } else if (arg.startsWith("--") && i + 1 < argv.length) {
      flags.set(arg.slice(2), argv[++i]);
    } else {
      console.error(`unexpected argument '${arg}'\n${usage()}`);
      return 1;
    }
  }
  const input = flags.get("in");
  const output = flags.get("out");
  const kind = flags.get("kind") as PlotKind | undefined;
  if (!input || !output || !kind) {
    console.error(usage());
    return 1;
  }
  if (!KINDS.includes(kind)) {
    console.error(`unknown plot kind '${kind}'\n${usage()}`);
    return 1;
  }
  try {
    const result = render({ input, kind, output, logX, logY });
    const size =
      result.model.kind === "frontier-curves"
        ? `${result.model.curves.length} curves`
        : result.model.kind === "phase-heatmap"
          ? `${result.model.cells.length} cells`
          : `${result.model.rows.length} rows`;
    console.log(`rendered ${kind} (${size}) -> ${output}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
