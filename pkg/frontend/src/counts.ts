/**
 * Cumulative choose/query count figure for a subset of arms.
 *
 * For each selected arm the thick line is the number of times it was
 * chosen up to round t and the thin line the number of times it was
 * queried; arrows on top mark epochs in which that arm was the best per
 * the environment metadata.
 *
 * Input schema: counts_<label>.csv with columns t, choose_arm_i...,
 * query_arm_i... (cumulative, possibly fractional when averaged over
 * repetitions).
 */

import { columnIndex, readCsv, SchemaError, Table } from "./csv";
import { EnvMeta } from "./meta";
import {
  arrowMarker,
  drawAxes,
  drawLegend,
  drawTitle,
  escapeXml,
  makeFrame,
  polylinePath,
  render,
} from "./svg";
import { MARGIN, PALETTE, THICK_LINE_WIDTH, THIN_LINE_WIDTH } from "./style";

export function armCount(table: Table): number {
  let k = 0;
  while (table.header.includes(`choose_arm_${k}`)) {
    k += 1;
  }
  if (k === 0) {
    throw new SchemaError(
      `${table.path}: no choose_arm_<i> columns; found: ${table.header.join(", ")}`);
  }
  return k;
}

function column(table: Table, name: string): number[] {
  const cols = columnIndex(table, [name]);
  const i = cols.get(name)!;
  return table.rows.map((row, r) => {
    const value = Number(row[i]);
    if (!Number.isFinite(value)) {
      throw new SchemaError(`${table.path}: row ${r + 2}, column ${name}: not a number`);
    }
    return value;
  });
}

function checkMonotone(values: number[], name: string, path: string): void {
  for (let i = 1; i < values.length; i++) {
    if (values[i] < values[i - 1] - 1e-9) {
      throw new SchemaError(
        `${path}: column ${name} must be nondecreasing (cumulative counts), ` +
        `violated at row ${i + 2}`);
    }
  }
}

export function renderCounts(countsPath: string, arms: number[], meta: EnvMeta | null): string {
  const table = readCsv(countsPath);
  const k = armCount(table);
  for (const arm of arms) {
    if (!Number.isInteger(arm) || arm < 0 || arm >= k) {
      throw new SchemaError(`unknown arm index ${arm}; file has arms 0..${k - 1}`);
    }
  }
  const t = column(table, "t");
  const tMax = Math.max(...t);

  const chosen = new Map<number, number[]>();
  const queried = new Map<number, number[]>();
  let yHi = 1;
  for (const arm of arms) {
    const c = column(table, `choose_arm_${arm}`);
    const q = column(table, `query_arm_${arm}`);
    checkMonotone(c, `choose_arm_${arm}`, table.path);
    checkMonotone(q, `query_arm_${arm}`, table.path);
    chosen.set(arm, c);
    queried.set(arm, q);
    yHi = Math.max(yHi, c[c.length - 1], q[q.length - 1]);
  }

  const frame = makeFrame([1, tMax], [0, yHi * 1.08]);
  drawTitle(frame, "Cumulative choose (thick) and query (thin) counts");
  drawAxes(frame, "round", "cumulative count");

  arms.forEach((arm, i) => {
    const color = PALETTE[i % PALETTE.length];
    const xs = t.map(frame.x);
    frame.body.push(`<g class="series" data-series="choose:arm_${arm}">`);
    frame.body.push(
      `<path class="line choose" d="${polylinePath(xs, chosen.get(arm)!.map(frame.y))}" ` +
      `fill="none" stroke="${color}" stroke-width="${THICK_LINE_WIDTH}"/>`,
    );
    frame.body.push(`</g>`);
    frame.body.push(`<g class="series" data-series="query:arm_${arm}">`);
    frame.body.push(
      `<path class="line query" d="${polylinePath(xs, queried.get(arm)!.map(frame.y))}" ` +
      `fill="none" stroke="${color}" stroke-width="${THIN_LINE_WIDTH}" ` +
      `stroke-dasharray="6,3"/>`,
    );
    frame.body.push(`</g>`);

    for (const [start, best] of meta?.best_arm_schedule ?? []) {
      if (best === arm && start >= 1 && start <= tMax) {
        frame.body.push(
          arrowMarker(frame.x(start), MARGIN.top + 18, color, `best:arm_${arm}@${start}`));
      }
    }
  });

  const legend = arms.flatMap((arm, i) => [
    { label: `arm ${arm} chosen`, color: PALETTE[i % PALETTE.length], width: THICK_LINE_WIDTH },
    { label: `arm ${arm} queried`, color: PALETTE[i % PALETTE.length], width: THIN_LINE_WIDTH, dash: "6,3" },
  ]);
  drawLegend(frame, legend);
  return render(frame);
}
