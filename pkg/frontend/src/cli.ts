/**
 * Command line for figure rendering.
 *
 * Usage:
 *   node dist/cli.js --kind domain --input domain.json --out fig.svg
 *   node dist/cli.js --kind slope --input slope6.csv --force force6.json \
 *       --input slope18.csv --force force18.json --out fig.svg
 *
 * Exit codes: 0 success, 1 schema/render failure, 2 usage error.
 */

import { SchemaError } from "./csv.js";
import { render, FigureKind, PlotSpec } from "./render.js";

const KINDS: FigureKind[] = [
  "domain",
  "heatmap",
  "surface",
  "slope",
  "error-map",
  "disk",
];

export function parseArgs(argv: string[]): PlotSpec {
  const spec: PlotSpec = { kind: "domain", inputs: [] };
  let kindSeen = false;
  const companions: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i]!;
    const value = () => {
      const v = argv[++i];
      if (v === undefined) throw new UsageError(`missing value for ${flag}`);
      return v;
    };
    switch (flag) {
      case "--kind": {
        const kind = value() as FigureKind;
        if (!KINDS.includes(kind)) {
          throw new UsageError(
            `unknown kind '${kind}' (expected ${KINDS.join("|")})`,
          );
        }
        spec.kind = kind;
        kindSeen = true;
        break;
      }
      case "--input":
        spec.inputs.push(value());
        break;
      case "--force":
        companions.push(value());
        break;
      case "--out":
        spec.output = value();
        break;
      case "--title":
        spec.title = value();
        break;
      case "--value":
        spec.valueColumn = value();
        break;
      case "--width":
        spec.width = Number(value());
        break;
      case "--height":
        spec.height = Number(value());
        break;
      case "--log":
        spec.logColor = true;
        break;
      case "--linear":
        spec.logColor = false;
        break;
      default:
        throw new UsageError(`unknown flag '${flag}'`);
    }
  }
  if (!kindSeen) throw new UsageError("--kind is required");
  if (spec.inputs.length === 0) throw new UsageError("--input is required");
  if (companions.length > 0) spec.companions = companions;
  return spec;
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (exc) {
    process.stderr.write(`usage error: ${(exc as Error).message}\n`);
    return 2;
  }
  try {
    const svg = render(spec);
    if (!spec.output) process.stdout.write(svg);
    return 0;
  } catch (exc) {
    if (exc instanceof SchemaError) {
      process.stderr.write(`${exc.message}\n`);
    } else {
      process.stderr.write(`render failure: ${(exc as Error).message}\n`);
    }
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
