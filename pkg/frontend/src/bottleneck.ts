/**
 * Closed forms of the budget-to-noise equivalence, duplicated here so the
 * training report can print the theoretical target next to the learned one
 * (the simulation package exposes no endpoint for these two-line formulas).
 */

export function noiseVarianceForBudget(cAiBits: number, power: number): number {
  if (cAiBits < 0 || !Number.isFinite(power) || power <= 0) {
    throw new RangeError(`invalid budget/power: c=${cAiBits}, p=${power}`);
  }
  if (!Number.isFinite(cAiBits)) return 0;
  if (cAiBits === 0) return Infinity;
  return power / (2 ** cAiBits - 1);
}

export function snrCeiling(cAiBits: number): number {
  if (cAiBits < 0) throw new RangeError(`invalid budget: ${cAiBits}`);
  return 2 ** cAiBits - 1;
}
