import { defineConfig } from "vitest/config";

// The document origin matches the port the parity test serves on, so the
// console's same-origin requests reach the live service without CORS.
export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: { url: "http://127.0.0.1:8797" },
    },
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
