import { describe, expect, it } from "vitest";

import {
  EMPTY_FILTER,
  filterToParams,
  parseBound,
  validateFilter,
} from "../src/filters.js";

describe("filterToParams", () => {
  it("empty filter produces an empty query", () => {
    expect(filterToParams(EMPTY_FILTER).toString()).toBe("");
  });

  it("set fields map to snake_case params", () => {
    const params = filterToParams({
      minGap: -0.5,
      maxGap: 1.25,
      minCountY: 10,
      minCountX1y: 2,
      minCountX2y: 3,
      search: "long hair",
    });
    expect(params.get("min_gap")).toBe("-0.5");
    expect(params.get("max_gap")).toBe("1.25");
    expect(params.get("min_count_y")).toBe("10");
    expect(params.get("min_count_x1y")).toBe("2");
    expect(params.get("min_count_x2y")).toBe("3");
    expect(params.get("search")).toBe("long hair");
  });

  it("zero thresholds are omitted (server defaults)", () => {
    const params = filterToParams({ ...EMPTY_FILTER, minCountY: 0 });
    expect(params.has("min_count_y")).toBe(false);
  });
});

describe("validateFilter", () => {
  it("accepts the empty filter", () => {
    expect(validateFilter(EMPTY_FILTER)).toEqual([]);
  });

  it("rejects an inverted gap range", () => {
    const problems = validateFilter({ ...EMPTY_FILTER, minGap: 1, maxGap: 0 });
    expect(problems.length).toBe(1);
    expect(problems[0]).toMatch(/min > max/);
  });

  it("rejects negative or fractional count thresholds", () => {
    expect(validateFilter({ ...EMPTY_FILTER, minCountY: -1 }).length).toBe(1);
    expect(validateFilter({ ...EMPTY_FILTER, minCountX1y: 1.5 }).length).toBe(1);
  });
});

describe("parseBound", () => {
  it("empty and whitespace mean no bound", () => {
    expect(parseBound("")).toBeNull();
    expect(parseBound("   ")).toBeNull();
  });

  it("parses decimals including negatives", () => {
    expect(parseBound("-0.25")).toBe(-0.25);
    expect(parseBound("1e-3")).toBe(0.001);
  });

  it("garbage is treated as no bound", () => {
    expect(parseBound("abc")).toBeNull();
  });
});
