import { Rng } from "./rng.js";

/**
 * Synthetic source: a Gaussian codebook of complex symbols. Each example is
 * (x, m) where m is a uniform message index and x its codeword, stored as a
 * real pair (re, im). The codebook is rescaled to hit the power constraint
 * exactly, so the empirical symbol power matches the nominal one.
 */
export interface Dataset {
  cardinality: number;
  power: number;
  /** codeword real pairs, length 2 * cardinality */
  codebook: Float32Array;
  sampleBatch(rng: Rng, n: number): { x: Float32Array; m: Int32Array };
}

export function gaussianCodebook(
  cardinality: number,
  power: number,
  seed: number,
): Dataset {
  if (cardinality < 2) throw new RangeError(`cardinality must be >= 2, got ${cardinality}`);
  if (!(power > 0)) throw new RangeError(`power must be > 0, got ${power}`);
  const rng = new Rng(seed);
  const codebook = new Float32Array(2 * cardinality);
  let total = 0;
  for (let i = 0; i < cardinality; i++) {
    const re = rng.normal() * Math.sqrt(power / 2);
    const im = rng.normal() * Math.sqrt(power / 2);
    codebook[2 * i] = re;
    codebook[2 * i + 1] = im;
    total += re * re + im * im;
  }
  const scale = Math.sqrt((power * cardinality) / total);
  for (let i = 0; i < codebook.length; i++) codebook[i] *= scale;

  return {
    cardinality,
    power,
    codebook,
    sampleBatch(batchRng: Rng, n: number) {
      const x = new Float32Array(2 * n);
      const m = new Int32Array(n);
      for (let j = 0; j < n; j++) {
        const idx = batchRng.intBelow(cardinality);
        m[j] = idx;
        x[2 * j] = codebook[2 * idx];
        x[2 * j + 1] = codebook[2 * idx + 1];
      }
      return { x, m };
    },
  };
}
