import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    // during development, forward API calls to a locally running service
    proxy: {
      "/api": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "happy-dom",
    include: ["src/**/*.test.ts"],
    testTimeout: 30000,
  },
});
