/** Prompt distribution view-model: percentage rows sized for a bar
 * chart, widest bar normalized to full width. */

import type { PromptReport } from "./types.js";

export interface Bar {
  category: string;
  count: number;
  percent: number;
  /** 0..100, relative to the report's largest percentage. */
  width: number;
}

export interface ChartModel {
  paradigm: string;
  total: number;
  bars: Bar[];
}

export function buildChart(report: PromptReport): ChartModel {
  const top = Math.max(1, ...report.categories.map((row) => row.percent));
  return {
    paradigm: report.paradigm,
    total: report.total,
    bars: report.categories.map((row) => ({
      category: row.category,
      count: row.count,
      percent: row.percent,
      width: (row.percent / top) * 100,
    })),
  };
}
