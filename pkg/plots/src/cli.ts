#!/usr/bin/env node
/** CLI: render --family <id> --in <dir> --out <file.png> */

import { writeFileSync, mkdirSync } from 'node:fs';
import { dirname } from 'node:path';
import { parseArgs } from 'node:util';

import { FAMILIES, renderFamily } from './families.js';
import { svgToPng } from './raster.js';

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  if (command !== 'render') {
    process.stderr.write(`usage: render --family <${FAMILIES.join('|')}> --in <dir> --out <file.png>\n`);
    return 2;
  }
  let values;
  try {
    ({ values } = parseArgs({
      args: rest,
      options: {
        family: { type: 'string' },
        in: { type: 'string' },
        out: { type: 'string' },
        svg: { type: 'boolean', default: false },
      },
    }));
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  const { family, in: inDir, out } = values;
  if (!family || !inDir || !out) {
    process.stderr.write('render requires --family, --in and --out\n');
    return 2;
  }
  try {
    const svg = renderFamily(family, inDir);
    mkdirSync(dirname(out), { recursive: true });
    if (values.svg || out.endsWith('.svg')) {
      writeFileSync(out, svg);
    } else {
      writeFileSync(out, await svgToPng(svg));
    }
    process.stdout.write(`${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`render failed: ${(err as Error).message}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
