import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

const CLI = new URL("../dist/cli.js", import.meta.url).pathname;

describe("vib-train CLI", () => {
  it("trains at a fixed weight and writes report plus checkpoint", () => {
    const dir = mkdtempSync(join(tmpdir(), "vib-cli-"));
    const out = join(dir, "run");
    const stdout = execFileSync(
      "node",
      [CLI, "--target-cai", "2", "--out", out, "--beta", "1.0", "--steps", "400"],
      { encoding: "utf-8" },
    );
    expect(stdout).toMatch(/i_hat_bits=/);
    expect(existsSync(`${out}.report.txt`)).toBe(true);
    expect(existsSync(`${out}.weights.json`)).toBe(true);
    const report = readFileSync(`${out}.report.txt`, "utf-8");
    expect(report).toContain("target_c_ai_bits: 2");
    expect(report).toContain("n_z_star_theory: 0.3333333333333333");
    const weights = JSON.parse(readFileSync(`${out}.weights.json`, "utf-8"));
    expect(weights.beta).toBe(1.0);
    expect(Object.keys(weights.weights)).toContain("encW1");
  });

  it("rejects missing arguments", () => {
    expect(() =>
      execFileSync("node", [CLI, "--target-cai", "2"], { encoding: "utf-8" }),
    ).toThrow();
  });
});
