import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { SchemaError, readCsv } from "../src/csv";
import { loadMeta } from "../src/meta";
import { renderReward, collectSeries } from "../src/reward";

const FIXTURES = join(__dirname, "..", "fixtures");

function countOccurrences(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("reward figure from the reference fixtures", () => {
  const svg = renderReward(join(FIXTURES, "reward_curves.csv"), loadMeta(FIXTURES));

  it("renders one series group per algorithm (5 in the fixture)", () => {
    expect(countOccurrences(svg, '<g class="series" data-series="')).toBe(5);
    for (const algo of ["decoupled", "exp3", "exp3p", "round_robin", "greedy_decoupled"]) {
      expect(svg).toContain(`data-series="${algo}"`);
    }
  });

  it("renders a std band and a mean line for every series", () => {
    expect(countOccurrences(svg, 'class="band"')).toBe(5);
    expect(countOccurrences(svg, 'class="line"')).toBe(5);
  });

  it("marks every switch round from the metadata", () => {
    const meta = loadMeta(FIXTURES)!;
    expect(meta.switch_times.length).toBeGreaterThan(0);
    expect(countOccurrences(svg, 'class="switch-marker"')).toBe(meta.switch_times.length);
  });

  it("includes a legend entry per algorithm", () => {
    expect(countOccurrences(svg, "<text", )).toBeGreaterThanOrEqual(5);
    expect(svg).toContain(">decoupled</text>");
  });
});

describe("reward figure edge cases", () => {
  it("omits switch markers when there is no metadata", () => {
    const svg = renderReward(join(FIXTURES, "reward_curves.csv"), null);
    expect(countOccurrences(svg, 'class="switch-marker"')).toBe(0);
  });

  it("degenerates the band onto the line when std is zero", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const path = join(dir, "reward_curves.csv");
    writeFileSync(path, "t,algo,mean,std\n1,a,0.5,0\n2,a,0.6,0\n3,a,0.7,0\n");
    const svg = renderReward(path, null);
    expect(countOccurrences(svg, 'class="band"')).toBe(1);
    // upper and lower band edges coincide with the mean line
    const band = /class="band" d="([^"]+)"/.exec(svg)![1];
    const line = /class="line" d="([^"]+)"/.exec(svg)![1];
    expect(band.startsWith(line)).toBe(true);
  });

  it("reports missing columns by name", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const path = join(dir, "reward_curves.csv");
    writeFileSync(path, "t,algorithm,avg\n1,a,0.5\n");
    expect(() => collectSeries(readCsv(path))).toThrowError(SchemaError);
    expect(() => collectSeries(readCsv(path))).toThrowError(/algo.*mean.*std|missing column/);
  });

  it("rejects non-numeric cells with row and column context", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const path = join(dir, "reward_curves.csv");
    writeFileSync(path, "t,algo,mean,std\n1,a,oops,0\n");
    expect(() => renderReward(path, null)).toThrowError(/row 2, column mean/);
  });
});
