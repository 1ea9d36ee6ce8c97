/**
 * Average-reward-over-time figure: one line per algorithm with a shaded
 * +/- one-standard-deviation band, plus vertical markers at the
 * environment's switch rounds.
 *
 * Input schema: reward_curves.csv with columns t, algo, mean, std (as
 * written by the experiment runner); statistics are rendered exactly as
 * emitted, never recomputed.
 */

import { columnIndex, readCsv, SchemaError, Table } from "./csv";
import { EnvMeta } from "./meta";
import {
  bandPath,
  drawAxes,
  drawLegend,
  drawTitle,
  escapeXml,
  makeFrame,
  polylinePath,
  render,
} from "./svg";
import { BAND_OPACITY, LINE_WIDTH, MARGIN, HEIGHT, MARKER_COLOR, PALETTE } from "./style";

interface Series {
  algo: string;
  t: number[];
  mean: number[];
  std: number[];
}

export function collectSeries(table: Table): Series[] {
  const cols = columnIndex(table, ["t", "algo", "mean", "std"]);
  const byAlgo = new Map<string, Series>();
  for (let r = 0; r < table.rows.length; r++) {
    const algo = table.rows[r][cols.get("algo")!];
    let series = byAlgo.get(algo);
    if (!series) {
      series = { algo, t: [], mean: [], std: [] };
      byAlgo.set(algo, series);
    }
    const read = (name: string) => {
      const value = Number(table.rows[r][cols.get(name)!]);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `${table.path}: row ${r + 2}, column ${name}: not a number`);
      }
      return value;
    };
    series.t.push(read("t"));
    series.mean.push(read("mean"));
    series.std.push(read("std"));
  }
  const all = [...byAlgo.values()];
  if (all.length === 0) {
    throw new SchemaError(`${table.path}: no data rows`);
  }
  return all;
}

export function renderReward(curvesPath: string, meta: EnvMeta | null): string {
  const series = collectSeries(readCsv(curvesPath));

  let tMax = 1;
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const s of series) {
    tMax = Math.max(tMax, ...s.t);
    for (let i = 0; i < s.t.length; i++) {
      yLo = Math.min(yLo, s.mean[i] - s.std[i]);
      yHi = Math.max(yHi, s.mean[i] + s.std[i]);
    }
  }
  const pad = 0.05 * (yHi - yLo || 1);
  const frame = makeFrame([1, tMax], [yLo - pad, yHi + pad]);
  drawTitle(frame, "Average reward over time");
  drawAxes(frame, "round", "average reward");

  const markers = (meta?.switch_times ?? []).filter((t) => t >= 1 && t <= tMax);
  for (const t of markers) {
    const px = frame.x(t);
    frame.body.push(
      `<line class="switch-marker" data-switch="${t}" x1="${px.toFixed(2)}" ` +
      `y1="${MARGIN.top}" x2="${px.toFixed(2)}" y2="${HEIGHT - MARGIN.bottom}" ` +
      `stroke="${MARKER_COLOR}" stroke-width="1" stroke-dasharray="5,4"/>`,
    );
  }

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const xs = s.t.map(frame.x);
    const upper = s.mean.map((m, j) => frame.y(m + s.std[j]));
    const lower = s.mean.map((m, j) => frame.y(m - s.std[j]));
    const line = s.mean.map(frame.y);
    frame.body.push(`<g class="series" data-series="${escapeXml(s.algo)}">`);
    frame.body.push(
      `<path class="band" d="${bandPath(xs, upper, lower)}" fill="${color}" ` +
      `fill-opacity="${BAND_OPACITY}" stroke="none"/>`,
    );
    frame.body.push(
      `<path class="line" d="${polylinePath(xs, line)}" fill="none" ` +
      `stroke="${color}" stroke-width="${LINE_WIDTH}"/>`,
    );
    frame.body.push(`</g>`);
  });

  drawLegend(frame, series.map((s, i) => ({
    label: s.algo,
    color: PALETTE[i % PALETTE.length],
    width: LINE_WIDTH,
  })));
  return render(frame);
}
