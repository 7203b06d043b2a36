/**
 * Variational bottleneck encoder for complex symbols.
 *
 * The encoder maps a symbol (as a real pair) to a complex Gaussian posterior
 * CN(mu(x), sigma(x) I); training minimizes CE(m, decoder(z)) + beta * KL
 * with the reparameterization trick. Complex symbols ride as 2-dim real
 * pairs; information quantities are computed in nats and reported in bits.
 *
 * At convergence on the scalar Gaussian-codebook task the posterior mean
 * becomes linear and the variance input-independent, i.e. the learned channel
 * approaches z = a x + w with isotropic w. The equivalent input-referred
 * noise (residual power plus posterior variance, divided by |a|^2) is the
 * learned counterpart of the closed-form budget noise p / (2^c - 1).
 */

import { fileURLToPath } from "node:url";

import * as tf from "@tensorflow/tfjs";

import { Rng } from "./rng.js";
import { Dataset, gaussianCodebook } from "./data.js";

let backendReady: Promise<string> | null = null;

/**
 * Select the fastest available tensor backend (WASM, falling back to plain
 * CPU). Call once before training; all computation afterwards is synchronous.
 */
export function initBackend(): Promise<string> {
  if (!backendReady) {
    backendReady = (async () => {
      try {
        const wasm = await import("@tensorflow/tfjs-backend-wasm");
        wasm.setWasmPaths(
          fileURLToPath(
            new URL("../node_modules/@tensorflow/tfjs-backend-wasm/dist/", import.meta.url),
          ),
        );
        await tf.setBackend("wasm");
      } catch {
        await tf.setBackend("cpu");
      }
      await tf.ready();
      return tf.getBackend();
    })();
  }
  return backendReady;
}

export interface VibConfig {
  beta: number;
  /** complex latent dimensions */
  latentDim: number;
  /** fixed prior variance, or "marginal" to track the latent power */
  priorVariance: number | "marginal";
  learningRate: number;
  batchSize: number;
  steps: number;
  /** message cardinality of the codebook */
  cardinality: number;
  /** symbol power */
  power: number;
  hiddenUnits: number;
  /**
   * Reconstruction head. "matched" scores messages by distance to a scaled
   * codeword image, the ML decoder for a Gaussian codebook over a Gaussian
   * channel; it is what pressures the encoder toward the z = a x + w
   * structure. "mlp" is a free-form classifier head kept for comparison.
   */
  decoderKind: "matched" | "mlp";
  seed: number;
  evalSamples: number;
}

export const DEFAULT_CONFIG: VibConfig = {
  beta: 1.0,
  latentDim: 1,
  priorVariance: "marginal",
  learningRate: 3e-3,
  batchSize: 256,
  steps: 2000,
  cardinality: 64,
  power: 1.0,
  hiddenUnits: 32,
  decoderKind: "matched",
  seed: 1234,
  evalSamples: 20000,
};

export interface WeightSnapshot {
  [name: string]: { shape: number[]; values: number[] };
}

export interface TrainedEncoder {
  config: VibConfig;
  beta: number;
  /** KL-bound mutual-information estimate, bits */
  iHatBits: number;
  /** independent binned estimate of I(M;Z), bits */
  iHatBinnedBits: number;
  /** true when the two estimates disagree by more than 20% */
  miDiscrepancyFlagged: boolean;
  /** learned input-referred noise variance (scalar task, latentDim 1) */
  nzHat: number;
  gainAbs: number;
  priorVariance: number;
  /** input-dependence of the posterior variance: std/mean across inputs */
  sigmaRelStd: number;
  decoderAccuracy: number;
  lossHistory: { ce: number[]; kl: number[]; total: number[] };
  weights: WeightSnapshot;
}

export class TrainingError extends Error {
  constructor(message: string, public lastCheckpoint: WeightSnapshot | null) {
    super(message);
  }
}

/**
 * z = mu + sqrt(sigma/2) * eps, per real component of each complex dim.
 * mu is (n, 2d) as [re..., im...], sigmaDiag (n, d) complex variances,
 * eps (n, 2d) standard normal. Differentiable in mu and sigmaDiag.
 */
export function reparameterize(
  mu: tf.Tensor2D,
  sigmaDiag: tf.Tensor2D,
  eps: tf.Tensor2D,
): tf.Tensor2D {
  if (mu.shape[1] !== 2 * sigmaDiag.shape[1] || mu.shape[1] !== eps.shape[1]) {
    throw new RangeError(
      `shape mismatch: mu ${mu.shape}, sigma ${sigmaDiag.shape}, eps ${eps.shape}`,
    );
  }
  return tf.tidy(() => {
    const std = tf.sqrt(tf.div(sigmaDiag, 2));
    const stdPairs = tf.concat([std, std], 1);
    return tf.add(mu, tf.mul(stdPairs, eps)) as tf.Tensor2D;
  });
}

interface Model {
  vars: Record<string, tf.Variable>;
  encode(x: tf.Tensor2D): { mu: tf.Tensor2D; logVar: tf.Tensor2D };
  decode(z: tf.Tensor2D): tf.Tensor2D;
}

function buildModel(config: VibConfig, rng: Rng, codebook: Float32Array): Model {
  const d = config.latentDim;
  const H = config.hiddenUnits;
  const M = config.cardinality;

  const init = (fanIn: number, fanOut: number, scale = Math.sqrt(2)) =>
    tf.variable(
      tf.tensor2d(
        Float32Array.from(rng.normals(fanIn * fanOut), (v) => (v * scale) / Math.sqrt(fanIn)),
        [fanIn, fanOut],
      ),
    );
  const zeros = (n: number, fill = 0) =>
    tf.variable(tf.tensor1d(new Float32Array(n).fill(fill)));

  const vars: Record<string, tf.Variable> = {
    encW1: init(2 * d, H),
    encB1: zeros(H),
    encW2: init(H, 3 * d, 1),
    // start the posterior variance near the interesting noise scale
    encB2: tf.variable(
      tf.tensor1d(
        Float32Array.from({ length: 3 * d }, (_, i) => (i >= 2 * d ? Math.log(0.3) : 0)),
      ),
    ),
  };

  const encode = (x: tf.Tensor2D) =>
    tf.tidy(() => {
      const h = tf.relu(tf.add(tf.matMul(x, vars.encW1), vars.encB1));
      const out = tf.add(tf.matMul(h, vars.encW2), vars.encB2) as tf.Tensor2D;
      const mu = tf.slice(out, [0, 0], [-1, 2 * d]) as tf.Tensor2D;
      const logVar = tf.slice(out, [0, 2 * d], [-1, d]) as tf.Tensor2D;
      return { mu, logVar };
    });

  let decode: Model["decode"];
  if (config.decoderKind === "matched") {
    if (d !== 1) throw new RangeError("matched decoder expects latentDim 1");
    // logits_m = -|z - b c_m|^2 / v with a learnable complex scale b and
    // width v: maximum-likelihood decoding of the codebook through an
    // equivalent Gaussian channel
    vars.decScale = tf.variable(tf.tensor1d([1.0, 0.0])); // b as (re, im)
    vars.decLogWidth = tf.variable(tf.tensor1d([Math.log(0.5)]));
    const cbRe = tf.tensor1d(
      Float32Array.from({ length: M }, (_, m) => codebook[2 * m]),
    );
    const cbIm = tf.tensor1d(
      Float32Array.from({ length: M }, (_, m) => codebook[2 * m + 1]),
    );
    decode = (z: tf.Tensor2D) =>
      tf.tidy(() => {
        const bRe = tf.slice(vars.decScale, 0, 1);
        const bIm = tf.slice(vars.decScale, 1, 1);
        const protoRe = tf.sub(tf.mul(bRe, cbRe), tf.mul(bIm, cbIm)); // (M,)
        const protoIm = tf.add(tf.mul(bRe, cbIm), tf.mul(bIm, cbRe));
        const zRe = tf.slice(z, [0, 0], [-1, 1]); // (B,1)
        const zIm = tf.slice(z, [0, 1], [-1, 1]);
        const dRe = tf.sub(zRe, tf.reshape(protoRe, [1, M]));
        const dIm = tf.sub(zIm, tf.reshape(protoIm, [1, M]));
        const sq = tf.add(tf.square(dRe), tf.square(dIm));
        return tf.div(tf.neg(sq), tf.exp(vars.decLogWidth)) as tf.Tensor2D;
      });
  } else {
    vars.decW1 = init(2 * d, H);
    vars.decB1 = zeros(H);
    vars.decW2 = init(H, M, 1);
    vars.decB2 = zeros(M);
    decode = (z: tf.Tensor2D) =>
      tf.tidy(() => {
        const h = tf.relu(tf.add(tf.matMul(z, vars.decW1), vars.decB1));
        return tf.add(tf.matMul(h, vars.decW2), vars.decB2) as tf.Tensor2D;
      });
  }

  return { vars, encode, decode };
}

/** batch-mean KL to CN(0, priorVariance I), nats */
function klBatchMean(
  mu: tf.Tensor2D,
  logVar: tf.Tensor2D,
  priorVariance: number,
  d: number,
): tf.Scalar {
  return tf.tidy(() => {
    const muRe = tf.slice(mu, [0, 0], [-1, d]);
    const muIm = tf.slice(mu, [0, d], [-1, d]);
    const muSq = tf.add(tf.square(muRe), tf.square(muIm));
    const sigma = tf.exp(logVar);
    const perDim = tf.add(
      tf.sub(Math.log(priorVariance), logVar),
      tf.sub(tf.div(tf.add(sigma, muSq), priorVariance), 1),
    );
    return tf.mean(tf.sum(perDim, 1)) as tf.Scalar;
  });
}

function snapshot(vars: Record<string, tf.Variable>): WeightSnapshot {
  const out: WeightSnapshot = {};
  for (const [name, v] of Object.entries(vars)) {
    out[name] = { shape: v.shape.slice(), values: Array.from(v.dataSync()) };
  }
  return out;
}

function binnedMutualInformationBits(
  zRe: Float32Array,
  zIm: Float32Array,
  labels: Int32Array,
  cardinality: number,
  bins = 24,
): number {
  const n = labels.length;
  let reLo = Infinity, reHi = -Infinity, imLo = Infinity, imHi = -Infinity;
  for (let i = 0; i < n; i++) {
    reLo = Math.min(reLo, zRe[i]); reHi = Math.max(reHi, zRe[i]);
    imLo = Math.min(imLo, zIm[i]); imHi = Math.max(imHi, zIm[i]);
  }
  const reW = (reHi - reLo) / bins || 1;
  const imW = (imHi - imLo) / bins || 1;
  const cells = bins * bins;
  const joint = new Float64Array(cardinality * cells);
  const pm = new Float64Array(cardinality);
  const pb = new Float64Array(cells);
  for (let i = 0; i < n; i++) {
    const bi = Math.min(Math.floor((zRe[i] - reLo) / reW), bins - 1);
    const bj = Math.min(Math.floor((zIm[i] - imLo) / imW), bins - 1);
    const cell = bi * bins + bj;
    joint[labels[i] * cells + cell] += 1;
    pm[labels[i]] += 1;
    pb[cell] += 1;
  }
  let mi = 0;
  let jointCells = 0, zCells = 0, mCells = 0;
  for (let m = 0; m < cardinality; m++) {
    if (pm[m] > 0) mCells++;
    for (let c = 0; c < cells; c++) {
      const pj = joint[m * cells + c];
      if (pj > 0) {
        jointCells++;
        mi += (pj / n) * Math.log((pj * n) / (pm[m] * pb[c]));
      }
    }
  }
  for (let c = 0; c < cells; c++) if (pb[c] > 0) zCells++;
  // Miller-Madow bias correction of the plug-in estimate
  const bias = (jointCells - zCells - mCells + 1) / (2 * n);
  return Math.max(mi - bias, 0) / Math.LN2;
}

export async function trainVib(
  dataset: Dataset,
  config: VibConfig,
): Promise<TrainedEncoder> {
  if (config.steps < 1 || config.batchSize < 1) {
    throw new RangeError("steps and batchSize must be >= 1");
  }
  if (dataset.cardinality !== config.cardinality) {
    throw new RangeError(
      `dataset carries ${dataset.cardinality} messages, config says ${config.cardinality}`,
    );
  }
  const d = config.latentDim;
  const rng = new Rng(config.seed);
  const model = buildModel(config, rng, dataset.codebook);
  const optimizer = tf.train.adam(config.learningRate);
  const history = { ce: [] as number[], kl: [] as number[], total: [] as number[] };

  let priorVar =
    config.priorVariance === "marginal" ? config.power + 0.3 : config.priorVariance;
  let checkpoint: WeightSnapshot | null = null;

  try {
    for (let step = 0; step < config.steps; step++) {
      if (step % 250 === 0) checkpoint = snapshot(model.vars);
      // let the event loop breathe so runners and IPC stay responsive
      if (step % 50 === 49) await new Promise<void>((r) => setImmediate(r));
      const { x, m } = dataset.sampleBatch(rng, config.batchSize);
      const epsArr = rng.normals(config.batchSize * 2 * d);

      const stats = tf.tidy(() => {
        const xT = tf.tensor2d(x, [config.batchSize, 2]);
        const labels = tf.oneHot(tf.tensor1d(m, "int32"), config.cardinality);
        const eps = tf.tensor2d(epsArr, [config.batchSize, 2 * d]);

        let ceVal = 0, klVal = 0, latentPower = 0;
        const loss = optimizer.minimize(
          () => {
            const { mu, logVar } = model.encode(xT);
            const z = reparameterize(mu, tf.exp(logVar) as tf.Tensor2D, eps);
            const logits = model.decode(z);
            const ce = tf.losses.softmaxCrossEntropy(labels, logits) as tf.Scalar;
            const kl = klBatchMean(mu, logVar, priorVar, d);
            ceVal = ce.dataSync()[0];
            klVal = kl.dataSync()[0];
            latentPower =
              tf.mean(tf.add(tf.exp(logVar), /* |mu|^2 per dim */ tf.add(
                tf.square(tf.slice(mu, [0, 0], [-1, d])),
                tf.square(tf.slice(mu, [0, d], [-1, d])),
              ))).dataSync()[0];
            return tf.add(ce, tf.mul(config.beta, kl)) as tf.Scalar;
          },
          true,
          Object.values(model.vars),
        ) as tf.Scalar;
        const total = loss.dataSync()[0];
        return { ceVal, klVal, total, latentPower };
      });

      if (!Number.isFinite(stats.total)) {
        throw new TrainingError(
          `loss diverged at step ${step} (total=${stats.total})`,
          checkpoint,
        );
      }
      history.ce.push(stats.ceVal);
      history.kl.push(stats.klVal);
      history.total.push(stats.total);
      if (config.priorVariance === "marginal") {
        priorVar = 0.98 * priorVar + 0.02 * stats.latentPower;
      }
    }

    return evaluate(model, dataset, config, priorVar, history);
  } finally {
    optimizer.dispose();
    for (const v of Object.values(model.vars)) v.dispose();
  }
}

function evaluate(
  model: Model,
  dataset: Dataset,
  config: VibConfig,
  priorVar: number,
  history: TrainedEncoder["lossHistory"],
): TrainedEncoder {
  const d = config.latentDim;
  const evalRng = new Rng(config.seed + 9999);
  const n = config.evalSamples;
  const { x, m } = dataset.sampleBatch(evalRng, n);
  const epsArr = evalRng.normals(n * 2 * d);

  const out = tf.tidy(() => {
    const xT = tf.tensor2d(x, [n, 2]);
    const { mu, logVar } = model.encode(xT);
    const sigma = tf.exp(logVar) as tf.Tensor2D;
    const z = reparameterize(mu, sigma, tf.tensor2d(epsArr, [n, 2 * d]));
    const logits = model.decode(z);
    const pred = tf.argMax(logits, 1);
    return {
      mu: mu.dataSync() as Float32Array,
      sigma: sigma.dataSync() as Float32Array,
      z: z.dataSync() as Float32Array,
      pred: pred.dataSync() as Int32Array,
    };
  });

  // tightest Gaussian prior: match it to the empirical latent power
  let latentPower = 0;
  for (let i = 0; i < n; i++) {
    for (let k = 0; k < d; k++) {
      const re = out.mu[i * 2 * d + k];
      const im = out.mu[i * 2 * d + d + k];
      latentPower += re * re + im * im + out.sigma[i * d + k];
    }
  }
  latentPower /= n * d;
  const prior = config.priorVariance === "marginal" ? latentPower : priorVar;

  let klSum = 0;
  let sigmaSum = 0;
  let sigmaSqSum = 0;
  for (let i = 0; i < n; i++) {
    for (let k = 0; k < d; k++) {
      const re = out.mu[i * 2 * d + k];
      const im = out.mu[i * 2 * d + d + k];
      const s = out.sigma[i * d + k];
      klSum += Math.log(prior / s) + (s + re * re + im * im) / prior - 1;
      sigmaSum += s;
      sigmaSqSum += s * s;
    }
  }
  const iHatBits = klSum / n / Math.LN2;
  const sigmaMean = sigmaSum / (n * d);
  const sigmaVar = Math.max(sigmaSqSum / (n * d) - sigmaMean * sigmaMean, 0);
  const sigmaRelStd = Math.sqrt(sigmaVar) / sigmaMean;

  // scalar-channel moments (latentDim 1): complex gain and input-referred noise
  let nzHat = NaN;
  let gainAbs = NaN;
  if (d === 1) {
    let axRe = 0, axIm = 0, xx = 0, resid = 0;
    for (let i = 0; i < n; i++) {
      const xr = x[2 * i], xi = x[2 * i + 1];
      const mr = out.mu[2 * i], mi_ = out.mu[2 * i + 1];
      axRe += mr * xr + mi_ * xi;
      axIm += mi_ * xr - mr * xi;
      xx += xr * xr + xi * xi;
    }
    const aRe = axRe / xx, aIm = axIm / xx;
    for (let i = 0; i < n; i++) {
      const xr = x[2 * i], xi = x[2 * i + 1];
      const er = out.mu[2 * i] - (aRe * xr - aIm * xi);
      const ei = out.mu[2 * i + 1] - (aRe * xi + aIm * xr);
      resid += er * er + ei * ei;
    }
    const gainSq = aRe * aRe + aIm * aIm;
    gainAbs = Math.sqrt(gainSq);
    nzHat = (resid / n + sigmaMean) / gainSq;
  }

  const zRe = new Float32Array(n);
  const zIm = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    zRe[i] = out.z[i * 2 * d];
    zIm[i] = out.z[i * 2 * d + d];
  }
  const iHatBinnedBits = binnedMutualInformationBits(zRe, zIm, m, dataset.cardinality);
  const discrepancy =
    Math.abs(iHatBinnedBits - iHatBits) > 0.2 * Math.max(iHatBits, 0.25);

  let correct = 0;
  for (let i = 0; i < n; i++) if (out.pred[i] === m[i]) correct++;

  return {
    config,
    beta: config.beta,
    iHatBits,
    iHatBinnedBits,
    miDiscrepancyFlagged: discrepancy,
    nzHat,
    gainAbs,
    priorVariance: prior,
    sigmaRelStd,
    decoderAccuracy: correct / n,
    lossHistory: history,
    weights: snapshot(model.vars),
  };
}

export function makeDataset(config: VibConfig): Dataset {
  return gaussianCodebook(config.cardinality, config.power, config.seed * 31 + 7);
}
