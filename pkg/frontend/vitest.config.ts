import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    testTimeout: 600_000,
    hookTimeout: 600_000,
    fileParallelism: false,
    // training blocks the event loop for minutes at a time; forked workers
    // keep the runner's IPC from timing out underneath it
    pool: "forks",
  },
});
