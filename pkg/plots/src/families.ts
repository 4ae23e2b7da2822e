/**
 * The four figure families, each an SVG assembled from harness CSVs.
 *
 * Line styles follow the fixed engine mapping: solid for the exact solver,
 * dashed for the hybrid-numeric engine, dash-dot for the closed forms.
 */

import { readdirSync } from 'node:fs';
import { join } from 'node:path';
import { scaleLinear } from 'd3-scale';

import { readMomentCsv, readQGridCsv, SchemaError, type MomentTable } from './csv.js';
import { gridToPngDataUri } from './heatmap.js';
import { imagePanel, legend, linePanel, svgDocument, type Series } from './svg.js';

export const FAMILIES = ['variances', 'qfunction', 'means', 'variances-imperfect'] as const;
export type Family = (typeof FAMILIES)[number];

export const ENGINE_STYLE: Record<string, { stroke: string; dash?: string }> = {
  exact: { stroke: '#1a1a1a' },
  'hybrid-numeric': { stroke: '#c03028', dash: '6,4' },
  'closed-form': { stroke: '#2060b0', dash: '9,3,2,3' },
};

function engineSeries(
  table: MomentTable,
  field: 'meanX' | 'meanP' | 'varX' | 'varP',
): Series[] {
  const engines = [...new Set(table.rows.map((r) => r.engine))];
  return engines.map((engine) => {
    const style = ENGINE_STYLE[engine] ?? { stroke: '#777777' };
    const points = table.rows
      .filter((r) => r.engine === engine && r.regimeFlag !== 'error')
      .map((r) => [r.timeOmegaT, r[field]] as [number, number]);
    return { label: engine, points, stroke: style.stroke, dash: style.dash };
  });
}

function listCsv(dir: string): string[] {
  return readdirSync(dir)
    .filter((f) => f.endsWith('.csv'))
    .sort()
    .map((f) => join(dir, f));
}

function momentTables(dir: string): MomentTable[] {
  const tables: MomentTable[] = [];
  for (const path of listCsv(dir)) {
    if (/_omegat_/.test(path)) continue; // grid snapshots, not moment files
    tables.push(readMomentCsv(path));
  }
  if (tables.length === 0) throw new SchemaError(`${dir}: no moment CSVs found`);
  return tables;
}

const PANEL = { width: 380, height: 260 };
const MARGIN = { left: 80, right: 30, top: 50, bottom: 60 };
const GAP = { x: 70, y: 60 };

function panelRect(col: number, row: number) {
  return {
    x: MARGIN.left + col * (PANEL.width + GAP.x),
    y: MARGIN.top + row * (PANEL.height + GAP.y),
    width: PANEL.width,
    height: PANEL.height,
  };
}

function docSize(cols: number, rows: number): [number, number] {
  return [
    MARGIN.left + cols * PANEL.width + (cols - 1) * GAP.x + MARGIN.right,
    MARGIN.top + rows * PANEL.height + (rows - 1) * GAP.y + MARGIN.bottom,
  ];
}

export function renderVariances(dir: string): string {
  const tables = momentTables(dir);
  const table = tables.find((t) => /variances\.csv$/.test(t.path)) ?? tables[0];
  const sx = engineSeries(table, 'varX');
  const sp = engineSeries(table, 'varP');
  const body = [
    linePanel(panelRect(0, 0), sx, 'Omega t', 'var_x (normalized)', 'conditional variance, x'),
    linePanel(panelRect(1, 0), sp, 'Omega t', 'var_p (normalized)', 'conditional variance, p'),
    legend(MARGIN.left, docSize(2, 1)[1] - 26, sx),
  ].join('\n');
  const [w, h] = docSize(2, 1);
  return svgDocument(w, h + 30, body);
}

export function renderMeans(dir: string): string {
  const tables = momentTables(dir);
  const table = tables.find((t) => /means\.csv$/.test(t.path)) ?? tables[0];
  const sx = engineSeries(table, 'meanX');
  const sp = engineSeries(table, 'meanP');
  const body = [
    linePanel(panelRect(0, 0), sx, 'Omega t', 'mean_x (normalized)', 'conditional mean, x'),
    linePanel(panelRect(1, 0), sp, 'Omega t', 'mean_p (normalized)', 'conditional mean, p'),
    legend(MARGIN.left, docSize(2, 1)[1] - 26, sx),
  ].join('\n');
  const [w, h] = docSize(2, 1);
  return svgDocument(w, h + 30, body);
}

export function renderVariancesImperfect(dir: string): string {
  const tables = momentTables(dir).filter((t) => /imperfect/.test(t.path));
  if (tables.length < 2) {
    throw new SchemaError(`${dir}: expected two imperfect-polarization CSVs, got ${tables.length}`);
  }
  const [a, b] = tables;
  const short = (t: MomentTable) => t.path.split('/').pop()!.replace('.csv', '');
  const body = [
    linePanel(panelRect(0, 0), engineSeries(a, 'varX'), 'Omega t', 'var_x', short(a)),
    linePanel(panelRect(1, 0), engineSeries(b, 'varX'), 'Omega t', 'var_x', short(b)),
    linePanel(panelRect(0, 1), engineSeries(a, 'varP'), 'Omega t', 'var_p', short(a)),
    linePanel(panelRect(1, 1), engineSeries(b, 'varP'), 'Omega t', 'var_p', short(b)),
    legend(MARGIN.left, docSize(2, 2)[1] - 26, engineSeries(a, 'varX')),
  ].join('\n');
  const [w, h] = docSize(2, 2);
  return svgDocument(w, h + 30, body);
}

export function renderQFunction(dir: string): string {
  const paths = listCsv(dir).filter((p) => /_omegat_[-0-9.e+]+\.csv$/.test(p));
  if (paths.length === 0) throw new SchemaError(`${dir}: no Q-grid snapshot CSVs found`);
  const grids = paths.map((p) => ({
    path: p,
    omegaT: Number(/_omegat_([-0-9.e+]+)\.csv$/.exec(p)![1]),
    table: readQGridCsv(p),
  }));
  grids.sort((a, b) => a.omegaT - b.omegaT);
  const vMax = Math.max(...grids.map((g) => Math.max(...g.table.values.map((r) => Math.max(...r)))));
  const cols = 3;
  const rows = Math.ceil(grids.length / cols);
  const parts: string[] = [];
  grids.forEach((g, i) => {
    const rect = panelRect(i % cols, Math.floor(i / cols));
    const t = g.table;
    const xs = scaleLinear()
      .domain([t.reNu[0], t.reNu[t.reNu.length - 1]])
      .range([rect.x, rect.x + rect.width]);
    const ys = scaleLinear()
      .domain([t.imNu[0], t.imNu[t.imNu.length - 1]])
      .range([rect.y + rect.height, rect.y]);
    parts.push(
      imagePanel(
        rect,
        gridToPngDataUri(t.values, vMax),
        xs,
        ys,
        'Re nu',
        'Im nu',
        `Omega t = ${g.omegaT}`,
      ),
    );
  });
  const [w, h] = docSize(cols, rows);
  return svgDocument(w, h, parts.join('\n'));
}

export function renderFamily(family: string, dir: string): string {
  switch (family) {
    case 'variances':
      return renderVariances(dir);
    case 'qfunction':
      return renderQFunction(dir);
    case 'means':
      return renderMeans(dir);
    case 'variances-imperfect':
      return renderVariancesImperfect(dir);
    default:
      throw new Error(`unknown family "${family}" (expected one of ${FAMILIES.join(', ')})`);
  }
}
