/**
 * KL divergence between the encoder posterior CN(mu, diag(sigma)) and the
 * prior CN(0, priorVariance * I), in nats, using the complex-Gaussian
 * convention (no 1/2 factors):
 *
 *   KL = log(|s I|/|Sigma|) + tr((s I)^-1 Sigma) + mu^H (s I)^-1 mu - d
 */

export function klGaussian(
  muRe: ArrayLike<number>,
  muIm: ArrayLike<number>,
  sigmaDiag: ArrayLike<number>,
  priorVariance: number,
): number {
  const d = sigmaDiag.length;
  if (muRe.length !== d || muIm.length !== d) {
    throw new RangeError(
      `shape mismatch: mu has ${muRe.length}/${muIm.length} dims, sigma has ${d}`,
    );
  }
  if (!(priorVariance > 0)) {
    throw new RangeError(`prior variance must be > 0, got ${priorVariance}`);
  }
  let kl = 0;
  for (let i = 0; i < d; i++) {
    const s = sigmaDiag[i];
    if (!(s > 0)) {
      throw new RangeError(`sigma must be positive definite, got diag ${s}`);
    }
    const muSq = muRe[i] * muRe[i] + muIm[i] * muIm[i];
    kl += Math.log(priorVariance / s) + (s + muSq) / priorVariance - 1;
  }
  return kl;
}
