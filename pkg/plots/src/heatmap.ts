/** Q-grid rasterization: grid values to an embedded PNG data URI. */

import { PNG } from 'pngjs';

// viridis anchors, interpolated linearly in RGB
const VIRIDIS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(v: number): [number, number, number] {
  const x = Math.min(1, Math.max(0, v)) * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(x));
  const f = x - i;
  const a = VIRIDIS[i];
  const b = VIRIDIS[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

/**
 * Encode the grid as PNG, one pixel per cell.  Values are normalized to the
 * given maximum (shared across panels so snapshots are comparable).  Rows
 * with larger Im nu end up at the top of the image.
 */
export function gridToPngDataUri(values: number[][], vMax: number): string {
  const height = values.length;
  const width = values[0].length;
  const png = new PNG({ width, height });
  for (let i = 0; i < height; i += 1) {
    const row = values[height - 1 - i];
    for (let j = 0; j < width; j += 1) {
      const [r, g, b] = colormap(vMax > 0 ? row[j] / vMax : 0);
      const k = (i * width + j) * 4;
      png.data[k] = r;
      png.data[k + 1] = g;
      png.data[k + 2] = b;
      png.data[k + 3] = 255;
    }
  }
  const buf = PNG.sync.write(png);
  return `data:image/png;base64,${buf.toString('base64')}`;
}
