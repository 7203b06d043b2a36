import { writeFileSync } from "node:fs";

import { noiseVarianceForBudget } from "./bottleneck.js";
import { TrainedEncoder } from "./vib.js";

/**
 * Structured text report for one calibrated encoder, diffable against the
 * simulation package's budget accounting.
 */
export function formatReport(
  encoder: TrainedEncoder,
  targetBits: number,
  beta: number,
): string {
  const lines = [
    "# vib-train report",
    `target_c_ai_bits: ${targetBits}`,
    `beta: ${beta}`,
    `i_hat_bits: ${encoder.iHatBits}`,
    `i_hat_binned_bits: ${encoder.iHatBinnedBits}`,
    `mi_discrepancy_flagged: ${encoder.miDiscrepancyFlagged}`,
    `n_z_hat: ${encoder.nzHat}`,
    `n_z_star_theory: ${noiseVarianceForBudget(targetBits, encoder.config.power)}`,
    `gain_abs: ${encoder.gainAbs}`,
    `prior_variance: ${encoder.priorVariance}`,
    `sigma_rel_std: ${encoder.sigmaRelStd}`,
    `decoder_accuracy: ${encoder.decoderAccuracy}`,
    `power: ${encoder.config.power}`,
    `cardinality: ${encoder.config.cardinality}`,
    `steps: ${encoder.config.steps}`,
    `seed: ${encoder.config.seed}`,
  ];
  return lines.join("\n") + "\n";
}

export function writeReport(
  basePath: string,
  encoder: TrainedEncoder,
  targetBits: number,
  beta: number,
): { reportPath: string; weightsPath: string } {
  const reportPath = `${basePath}.report.txt`;
  const weightsPath = `${basePath}.weights.json`;
  writeFileSync(reportPath, formatReport(encoder, targetBits, beta), "utf-8");
  writeFileSync(
    weightsPath,
    JSON.stringify({ config: encoder.config, beta, weights: encoder.weights }),
    "utf-8",
  );
  return { reportPath, weightsPath };
}
