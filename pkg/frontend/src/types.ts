/** Payload shapes served under /api/v1. Field names are snake_case on the
 * wire; they are kept as-is so every number displayed is exactly what the
 * server sent. */

export const METRIC_IDS = [
  "dp",
  "sdc",
  "ji",
  "llr",
  "pmi",
  "npmi_y",
  "npmi_xy",
  "pmi2",
  "tau_b",
  "ttest",
] as const;

export type MetricId = (typeof METRIC_IDS)[number];

export function isMetricId(value: string): value is MetricId {
  return (METRIC_IDS as readonly string[]).includes(value);
}

export interface RunInfo {
  id: string;
  x1: string;
  x2: string;
  n: number;
  label_count: number;
  table_digest: string;
  alpha: number;
  top_k: number;
  metrics: string[];
}

export interface RankingRow {
  rank: number;
  label: string;
  oriented_gap: number;
  raw_gap: number;
  count_y: number;
  count_x1y: number;
  count_x2y: number;
  flagged: boolean;
}

export interface RankingsPage {
  run_id: string;
  metric: string;
  x1: string;
  x2: string;
  total: number;
  page: number;
  page_size: number;
  rows: RankingRow[];
}

export interface Distribution {
  bin_edges: number[];
  counts: number[];
  total: number;
}

export interface MetricValue {
  rank: number;
  oriented_gap: number;
  raw_gap: number;
}

export interface LabelDetail {
  label: string;
  count_y: number;
  count_x1y: number;
  count_x2y: number;
  flagged: boolean;
  note: string;
  metrics: Record<string, MetricValue>;
}

export interface FlagState {
  label: string;
  flagged: boolean;
  note: string;
}
