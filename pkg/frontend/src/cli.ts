/**
 * vib-train: calibrate a bottleneck encoder to a target bit budget and write
 * a checkpoint plus a structured text report.
 *
 *   node dist/cli.js --target-cai 2 --out run/encoder [--steps N] [--seed S]
 *                    [--beta B]   # skip calibration, train once at B
 */

import { calibrateBeta } from "./calibrate.js";
import { writeReport } from "./report.js";
import { DEFAULT_CONFIG, initBackend, makeDataset, trainVib } from "./vib.js";

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`expected --flag value pairs, got ${argv.join(" ")}`);
    }
    args.set(key.slice(2), value);
  }
  return args;
}

export async function main(argv: string[]): Promise<number> {
  let args: Map<string, string>;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  const target = Number(args.get("target-cai"));
  const out = args.get("out");
  if (!Number.isFinite(target) || target < 0 || !out) {
    console.error("usage: vib-train --target-cai <bits> --out <path prefix>");
    return 2;
  }
  console.error(`backend: ${await initBackend()}`);
  const config = {
    ...DEFAULT_CONFIG,
    steps: args.has("steps") ? Number(args.get("steps")) : DEFAULT_CONFIG.steps,
    seed: args.has("seed") ? Number(args.get("seed")) : DEFAULT_CONFIG.seed,
  };

  let beta: number;
  let encoder;
  if (args.has("beta")) {
    beta = Number(args.get("beta"));
    encoder = await trainVib(makeDataset(config), { ...config, beta });
  } else {
    const result = await calibrateBeta(target, config);
    beta = result.beta;
    encoder = result.encoder;
    for (const e of result.evaluations) {
      console.error(`beta=${e.beta.toExponential(3)} -> ${e.iHatBits.toFixed(3)} bits`);
    }
  }
  const { reportPath, weightsPath } = writeReport(out, encoder, target, beta);
  console.error(`report: ${reportPath}`);
  console.error(`weights: ${weightsPath}`);
  console.log(
    `i_hat_bits=${encoder.iHatBits.toFixed(4)} n_z_hat=${encoder.nzHat.toFixed(4)} beta=${beta.toExponential(3)}`,
  );
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
