/**
 * Readers for the two harness CSV schemas.
 *
 * Moment files: time_omega_t, engine, mean_x, mean_p, var_x, var_p, regime_flag
 * Q-grid files: re_nu, im_nu, q_value
 *
 * `#` lines carry the parameter echo and are exposed as metadata.
 */

import { readFileSync } from 'node:fs';

export const MOMENT_COLUMNS = [
  'time_omega_t',
  'engine',
  'mean_x',
  'mean_p',
  'var_x',
  'var_p',
  'regime_flag',
] as const;

export const QGRID_COLUMNS = ['re_nu', 'im_nu', 'q_value'] as const;

export class SchemaError extends Error {}

export type MomentRow = {
  timeOmegaT: number;
  engine: string;
  meanX: number;
  meanP: number;
  varX: number;
  varP: number;
  regimeFlag: string;
};

export type MomentTable = {
  path: string;
  meta: Record<string, string>;
  rows: MomentRow[];
};

export type QGridTable = {
  path: string;
  meta: Record<string, string>;
  /** axis values in increasing order */
  reNu: number[];
  imNu: number[];
  /** values[i][j] = Q(imNu[i], reNu[j]) */
  values: number[][];
};

function splitContent(path: string): { meta: Record<string, string>; lines: string[] } {
  const raw = readFileSync(path, 'utf8');
  const meta: Record<string, string> = {};
  const lines: string[] = [];
  for (const line of raw.split(/\r?\n/)) {
    if (line.length === 0) continue;
    if (line.startsWith('#')) {
      const body = line.slice(1).trim();
      const eq = body.indexOf('=');
      if (eq > 0) meta[body.slice(0, eq)] = body.slice(eq + 1);
      continue;
    }
    lines.push(line);
  }
  if (lines.length === 0) throw new SchemaError(`${path}: empty CSV`);
  return { meta, lines };
}

function checkHeader(path: string, header: string[], expected: readonly string[]): void {
  for (const column of expected) {
    if (!header.includes(column)) {
      throw new SchemaError(`${path}: missing column "${column}" (got: ${header.join(', ')})`);
    }
  }
}

export function readMomentCsv(path: string): MomentTable {
  const { meta, lines } = splitContent(path);
  const header = lines[0].split(',');
  checkHeader(path, header, MOMENT_COLUMNS);
  const idx = (name: string) => header.indexOf(name);
  const rows: MomentRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(',');
    if (parts.length !== header.length) {
      throw new SchemaError(`${path}: row has ${parts.length} fields, header has ${header.length}`);
    }
    rows.push({
      timeOmegaT: Number(parts[idx('time_omega_t')]),
      engine: parts[idx('engine')],
      meanX: Number(parts[idx('mean_x')]),
      meanP: Number(parts[idx('mean_p')]),
      varX: Number(parts[idx('var_x')]),
      varP: Number(parts[idx('var_p')]),
      regimeFlag: parts[idx('regime_flag')],
    });
  }
  return { path, meta, rows };
}

export function readQGridCsv(path: string): QGridTable {
  const { meta, lines } = splitContent(path);
  const header = lines[0].split(',');
  checkHeader(path, header, QGRID_COLUMNS);
  const iRe = header.indexOf('re_nu');
  const iIm = header.indexOf('im_nu');
  const iQ = header.indexOf('q_value');
  const reSet = new Set<number>();
  const imSet = new Set<number>();
  const cells: { re: number; im: number; q: number }[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(',');
    if (parts.length !== header.length) {
      throw new SchemaError(`${path}: malformed grid row "${line}"`);
    }
    const re = Number(parts[iRe]);
    const im = Number(parts[iIm]);
    const q = Number(parts[iQ]);
    if (!Number.isFinite(re) || !Number.isFinite(im) || !Number.isFinite(q)) {
      throw new SchemaError(`${path}: non-numeric grid entry "${line}"`);
    }
    reSet.add(re);
    imSet.add(im);
    cells.push({ re, im, q });
  }
  const reNu = [...reSet].sort((a, b) => a - b);
  const imNu = [...imSet].sort((a, b) => a - b);
  if (cells.length !== reNu.length * imNu.length) {
    throw new SchemaError(
      `${path}: expected a full ${imNu.length}x${reNu.length} grid, got ${cells.length} cells`,
    );
  }
  const reIndex = new Map(reNu.map((v, i) => [v, i]));
  const imIndex = new Map(imNu.map((v, i) => [v, i]));
  const values = imNu.map(() => new Array<number>(reNu.length).fill(NaN));
  for (const cell of cells) {
    values[imIndex.get(cell.im)!][reIndex.get(cell.re)!] = cell.q;
  }
  return { path, meta, reNu, imNu, values };
}
