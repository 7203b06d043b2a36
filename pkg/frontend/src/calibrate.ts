/**
 * Bisection on the compression weight until the encoder's information rate
 * matches a target budget.
 */

import { Dataset } from "./data.js";
import { TrainedEncoder, VibConfig, makeDataset, trainVib } from "./vib.js";

export const BETA_MIN = 1e-4;
export const BETA_MAX = 1e3;
const MAX_EVALUATIONS = 14;

export class CalibrationError extends Error {}

export interface CalibrationResult {
  beta: number;
  encoder: TrainedEncoder;
  evaluations: { beta: number; iHatBits: number }[];
}

export async function calibrateBeta(
  targetBits: number,
  config: VibConfig,
  dataset?: Dataset,
): Promise<CalibrationResult> {
  if (targetBits < 0 || !Number.isFinite(targetBits)) {
    throw new RangeError(`target must be finite and >= 0, got ${targetBits}`);
  }
  const data = dataset ?? makeDataset(config);
  const evaluations: CalibrationResult["evaluations"] = [];

  const evaluate = async (beta: number): Promise<TrainedEncoder> => {
    const encoder = await trainVib(data, { ...config, beta });
    evaluations.push({ beta, iHatBits: encoder.iHatBits });
    return encoder;
  };

  if (targetBits === 0) {
    // zero budget: the large-beta branch, no bracketing needed
    const encoder = await evaluate(BETA_MAX);
    return { beta: BETA_MAX, encoder, evaluations };
  }

  const tolerance = 0.05 * targetBits;
  // bracket in log space: information rate above the target at lo, below at
  // hi; rates at the ends start unknown and are filled in as evaluated
  let lo = BETA_MIN;
  let hi = BETA_MAX;
  let rateLo = Number.NaN;
  let rateHi = Number.NaN;
  let best: TrainedEncoder | null = null;

  for (let i = 0; i < MAX_EVALUATIONS; i++) {
    let beta = Math.sqrt(lo * hi);
    if (Number.isFinite(rateLo) && Number.isFinite(rateHi) && rateLo > rateHi) {
      // secant step on (log beta, rate), clamped away from the bracket ends;
      // the rate drops steeply near the collapse threshold and plain
      // bisection wastes evaluations there
      const t = (rateLo - targetBits) / (rateLo - rateHi);
      const clamped = Math.min(Math.max(t, 0.12), 0.88);
      beta = Math.exp(Math.log(lo) + clamped * (Math.log(hi) - Math.log(lo)));
    }
    const encoder = await evaluate(beta);
    if (
      best === null ||
      Math.abs(encoder.iHatBits - targetBits) < Math.abs(best.iHatBits - targetBits)
    ) {
      best = encoder;
    }
    if (Math.abs(encoder.iHatBits - targetBits) <= tolerance) {
      return { beta, encoder, evaluations };
    }
    if (encoder.iHatBits > targetBits) {
      lo = beta;
      rateLo = encoder.iHatBits;
    } else {
      hi = beta;
      rateHi = encoder.iHatBits;
    }
  }
  throw new CalibrationError(
    `no beta in [${BETA_MIN}, ${BETA_MAX}] reaches ${targetBits} bits within ` +
      `${tolerance.toFixed(3)} after ${MAX_EVALUATIONS} evaluations ` +
      `(closest: ${best?.iHatBits.toFixed(3)} bits at beta=${best?.beta})`,
  );
}
