/** Filter state mirrors the server's ranking filter semantics: count
 * thresholds plus an oriented-gap range and a label substring search.
 * The client only builds query strings; filtering itself always happens
 * server-side so the view never disagrees with an export. */

export interface GapFilter {
  minGap: number | null;
  maxGap: number | null;
  minCountY: number;
  minCountX1y: number;
  minCountX2y: number;
  search: string;
}

export const EMPTY_FILTER: GapFilter = {
  minGap: null,
  maxGap: null,
  minCountY: 0,
  minCountX1y: 0,
  minCountX2y: 0,
  search: "",
};

/** Query parameters for /rankings and /download; defaults are omitted so an
 * empty filter yields an empty query (and a byte-identical download). */
export function filterToParams(filter: GapFilter): URLSearchParams {
  const params = new URLSearchParams();
  if (filter.minGap !== null) {
    params.set("min_gap", String(filter.minGap));
  }
  if (filter.maxGap !== null) {
    params.set("max_gap", String(filter.maxGap));
  }
  if (filter.minCountY > 0) {
    params.set("min_count_y", String(filter.minCountY));
  }
  if (filter.minCountX1y > 0) {
    params.set("min_count_x1y", String(filter.minCountX1y));
  }
  if (filter.minCountX2y > 0) {
    params.set("min_count_x2y", String(filter.minCountX2y));
  }
  if (filter.search !== "") {
    params.set("search", filter.search);
  }
  return params;
}

/** Human-readable problems with a filter; empty when it is sendable. */
export function validateFilter(filter: GapFilter): string[] {
  const problems: string[] = [];
  if (
    filter.minGap !== null &&
    filter.maxGap !== null &&
    filter.minGap > filter.maxGap
  ) {
    problems.push("gap range is empty (min > max)");
  }
  for (const [name, value] of [
    ["min count y", filter.minCountY],
    ["min count x1,y", filter.minCountX1y],
    ["min count x2,y", filter.minCountX2y],
  ] as const) {
    if (!Number.isInteger(value) || value < 0) {
      problems.push(`${name} must be a non-negative integer`);
    }
  }
  return problems;
}

/** Parse a numeric input field: empty means "no bound". */
export function parseBound(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") {
    return null;
  }
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}
