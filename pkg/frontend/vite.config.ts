import { defineConfig } from 'vite'

export default defineConfig({
  build: { outDir: 'dist' },
  server: {
    proxy: {
      // dev-mode convenience: talk to a local service without CORS fuss
      '/events': 'http://127.0.0.1:8400',
      '/ingest': 'http://127.0.0.1:8400',
      '/static': 'http://127.0.0.1:8400',
      '/geometry': 'http://127.0.0.1:8400',
    },
  },
  test: {
    environment: 'node',
    include: ['tests/**/*.test.ts'],
  },
})
