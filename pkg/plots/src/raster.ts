/** SVG to PNG via the WASM rasterizer, with system DejaVu when present. */

import { readFileSync, existsSync } from 'node:fs';
import { createRequire } from 'node:module';

import { initWasm, Resvg } from '@resvg/resvg-wasm';

const FONT_CANDIDATES = [
  '/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf',
  '/usr/share/fonts/TTF/DejaVuSans.ttf',
];

let ready: Promise<void> | null = null;

async function ensureWasm(): Promise<void> {
  if (!ready) {
    const require = createRequire(import.meta.url);
    const wasmPath = require.resolve('@resvg/resvg-wasm/index_bg.wasm');
    ready = initWasm(readFileSync(wasmPath));
  }
  await ready;
}

export async function svgToPng(svg: string): Promise<Buffer> {
  await ensureWasm();
  const fontBuffers: Uint8Array[] = [];
  for (const candidate of FONT_CANDIDATES) {
    if (existsSync(candidate)) {
      fontBuffers.push(readFileSync(candidate));
      break;
    }
  }
  const resvg = new Resvg(svg, {
    font: {
      fontBuffers,
      loadSystemFonts: false,
      defaultFontFamily: 'DejaVu Sans',
    },
  });
  return Buffer.from(resvg.render().asPng());
}
