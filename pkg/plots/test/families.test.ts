import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { renderFamily } from '../src/families.js';

const FIX = join(__dirname, 'fixtures');

function strokeStyles(svg: string): Set<string> {
  const styles = new Set<string>();
  for (const m of svg.matchAll(/<path [^>]*data-series="([^"]+)"[^>]*>/g)) {
    const dash = /stroke-dasharray="([^"]+)"/.exec(m[0]);
    styles.add(dash ? dash[1] : 'solid');
  }
  return styles;
}

describe('variance family', () => {
  it('renders two panels with three line styles', () => {
    const svg = renderFamily('variances', join(FIX, 'variances'));
    expect(svg).toContain('conditional variance, x');
    expect(svg).toContain('conditional variance, p');
    const styles = strokeStyles(svg);
    expect(styles.size).toBe(3);
    expect(styles.has('solid')).toBe(true);
    expect(svg).toContain('Omega t'); // axis label in normalized units
  });
});

describe('means family', () => {
  it('renders mean panels for all engines', () => {
    const svg = renderFamily('means', join(FIX, 'means'));
    expect(svg).toContain('conditional mean, x');
    expect(strokeStyles(svg).size).toBe(3);
  });
});

describe('imperfect-polarization family', () => {
  it('renders a 2x2 layout over both presets', () => {
    const svg = renderFamily('variances-imperfect', join(FIX, 'imperfect'));
    expect(svg).toContain('variances_imperfect_alpha_0p01');
    expect(svg).toContain('variances_imperfect_alpha_sqrt0p001');
    const panels = svg.match(/conditional|var_x|var_p/g);
    expect(panels).not.toBeNull();
    expect(strokeStyles(svg).size).toBe(3);
  });
});

describe('qfunction family', () => {
  it('emits six heatmap panels', () => {
    const svg = renderFamily('qfunction', join(FIX, 'qfunction'));
    const images = svg.match(/data-panel="heatmap"/g) ?? [];
    expect(images.length).toBe(6);
    expect(svg).toContain('Omega t = 300');
    expect(svg).toContain('Re nu');
  });
});

describe('error handling', () => {
  it('unknown family fails with the family list', () => {
    expect(() => renderFamily('nope', FIX)).toThrowError(/variances.*qfunction/);
  });
});
