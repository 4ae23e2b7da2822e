/** Minimal SVG assembly: panels, axes, line paths, and embedded images. */

import { scaleLinear, type ScaleLinear } from 'd3-scale';
import { line as d3line } from 'd3-shape';

export type Rect = { x: number; y: number; width: number; height: number };

export type Series = {
  label: string;
  points: [number, number][];
  stroke: string;
  /** SVG stroke-dasharray, or undefined for a solid line */
  dash?: string;
};

const AXIS_COLOR = '#222222';
const FONT = 'DejaVu Sans, Helvetica, sans-serif';

export function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    '\n</svg>\n'
  );
}

function fmtTick(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-3)) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

export function axes(
  rect: Rect,
  xs: ScaleLinear<number, number>,
  ys: ScaleLinear<number, number>,
  xLabel: string,
  yLabel: string,
  title = '',
): string {
  const parts: string[] = [];
  const x0 = rect.x;
  const y0 = rect.y + rect.height;
  parts.push(
    `<rect x="${rect.x}" y="${rect.y}" width="${rect.width}" height="${rect.height}" ` +
    `fill="none" stroke="${AXIS_COLOR}" stroke-width="1"/>`,
  );
  for (const t of xs.ticks(5)) {
    const px = xs(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 4}" stroke="${AXIS_COLOR}"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 16}" font-family="${FONT}" font-size="11" ` +
      `fill="${AXIS_COLOR}" text-anchor="middle">${esc(fmtTick(t))}</text>`,
    );
  }
  for (const t of ys.ticks(5)) {
    const py = ys(t);
    parts.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="${AXIS_COLOR}"/>`);
    parts.push(
      `<text x="${x0 - 6}" y="${py + 3.5}" font-family="${FONT}" font-size="11" ` +
      `fill="${AXIS_COLOR}" text-anchor="end">${esc(fmtTick(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${rect.x + rect.width / 2}" y="${y0 + 32}" font-family="${FONT}" ` +
    `font-size="13" fill="${AXIS_COLOR}" text-anchor="middle">${esc(xLabel)}</text>`,
  );
  parts.push(
    `<text x="${x0 - 42}" y="${rect.y + rect.height / 2}" font-family="${FONT}" ` +
    `font-size="13" fill="${AXIS_COLOR}" text-anchor="middle" ` +
    `transform="rotate(-90 ${x0 - 42} ${rect.y + rect.height / 2})">${esc(yLabel)}</text>`,
  );
  if (title) {
    parts.push(
      `<text x="${rect.x + rect.width / 2}" y="${rect.y - 8}" font-family="${FONT}" ` +
      `font-size="13" fill="${AXIS_COLOR}" text-anchor="middle">${esc(title)}</text>`,
    );
  }
  return parts.join('\n');
}

export function linePanel(
  rect: Rect,
  series: Series[],
  xLabel: string,
  yLabel: string,
  title = '',
  yDomain?: [number, number],
): string {
  const finite = series.flatMap((s) => s.points.filter((p) => Number.isFinite(p[1])));
  if (finite.length === 0) throw new Error(`panel "${title || yLabel}" has no finite data`);
  const xExtent: [number, number] = [
    Math.min(...finite.map((p) => p[0])),
    Math.max(...finite.map((p) => p[0])),
  ];
  const yExtent: [number, number] = yDomain ?? [
    Math.min(...finite.map((p) => p[1])),
    Math.max(...finite.map((p) => p[1])),
  ];
  if (yExtent[0] === yExtent[1]) {
    yExtent[0] -= 0.5;
    yExtent[1] += 0.5;
  }
  const xs = scaleLinear().domain(xExtent).range([rect.x, rect.x + rect.width]).nice();
  const ys = scaleLinear().domain(yExtent).range([rect.y + rect.height, rect.y]).nice();
  const gen = d3line<[number, number]>()
    .defined((p) => Number.isFinite(p[1]))
    .x((p) => xs(p[0]))
    .y((p) => ys(p[1]));
  const parts = [axes(rect, xs, ys, xLabel, yLabel, title)];
  for (const s of series) {
    const d = gen(s.points);
    if (!d) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : '';
    parts.push(
      `<path d="${d}" fill="none" stroke="${s.stroke}" stroke-width="1.6"${dash} ` +
      `data-series="${esc(s.label)}"/>`,
    );
  }
  return parts.join('\n');
}

export function legend(x: number, y: number, series: Series[]): string {
  const parts: string[] = [];
  series.forEach((s, i) => {
    const yy = y + i * 18;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : '';
    parts.push(
      `<line x1="${x}" y1="${yy}" x2="${x + 34}" y2="${yy}" stroke="${s.stroke}" ` +
      `stroke-width="1.6"${dash}/>`,
    );
    parts.push(
      `<text x="${x + 40}" y="${yy + 4}" font-family="${FONT}" font-size="12" ` +
      `fill="${AXIS_COLOR}">${esc(s.label)}</text>`,
    );
  });
  return parts.join('\n');
}

export function imagePanel(
  rect: Rect,
  pngDataUri: string,
  xs: ScaleLinear<number, number>,
  ys: ScaleLinear<number, number>,
  xLabel: string,
  yLabel: string,
  title: string,
): string {
  const img =
    `<image x="${rect.x}" y="${rect.y}" width="${rect.width}" height="${rect.height}" ` +
    `preserveAspectRatio="none" href="${pngDataUri}" data-panel="heatmap"/>`;
  return img + '\n' + axes(rect, xs, ys, xLabel, yLabel, title);
}
