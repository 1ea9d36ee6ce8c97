/**
 * Environment metadata sidecar (env.meta.json) access.
 *
 * The metadata is optional for the reward figure (no switch markers when
 * absent) and supplies the best-arm schedule for the counts figure.
 */

import { existsSync, readFileSync } from "fs";
import { join } from "path";

import { SchemaError } from "./csv";

export interface EnvMeta {
  switch_times: number[];
  best_arm_schedule: Array<[number, number]>;
}

export function loadMeta(dir: string): EnvMeta | null {
  const path = join(dir, "env.meta.json");
  if (!existsSync(path)) {
    return null;
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SchemaError(`${path}: invalid JSON: ${(err as Error).message}`);
  }
  const obj = parsed as Record<string, unknown>;
  const switchTimes = Array.isArray(obj.switch_times) ? (obj.switch_times as number[]) : [];
  const schedule = Array.isArray(obj.best_arm_schedule)
    ? (obj.best_arm_schedule as Array<[number, number]>)
    : [];
  return { switch_times: switchTimes, best_arm_schedule: schedule };
}
