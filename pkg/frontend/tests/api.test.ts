import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { EMPTY_FILTER } from "../src/filters.js";
import type { RankingsPage } from "../src/types.js";

/** fetch double: records requests, replays canned responses. */
function fakeFetch(
  handler: (url: string, init?: RequestInit) => { status?: number; body: unknown },
) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    const { status = 200, body } = handler(url, init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, fetchFn };
}

function page(rows: unknown[], total: number, pageNo: number): RankingsPage {
  return {
    run_id: "r",
    metric: "dp",
    x1: "a",
    x2: "b",
    total,
    page: pageNo,
    page_size: rows.length,
    rows: rows as RankingsPage["rows"],
  };
}

function row(label: string, rank: number) {
  return {
    rank,
    label,
    oriented_gap: 0.5 - rank * 0.1,
    raw_gap: 0.5 - rank * 0.1,
    count_y: 10,
    count_x1y: 5,
    count_x2y: 2,
    flagged: false,
  };
}

describe("ApiClient", () => {
  it("lists runs", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      body: { runs: [{ id: "r1" }, { id: "r2" }] },
    }));
    const client = new ApiClient("/api/v1", fetchFn);
    const runs = await client.listRuns();
    expect(runs.map((r) => r.id)).toEqual(["r1", "r2"]);
    expect(calls[0]?.url).toBe("/api/v1/runs");
  });

  it("builds ranking queries with snake_case filter params", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ body: page([], 0, 0) }));
    const client = new ApiClient("/api/v1", fetchFn);
    await client.getRankings("run one", "npmi_xy", 2, 25, {
      ...EMPTY_FILTER,
      minGap: 0.1,
      minCountY: 5,
      search: "hat",
    });
    const url = new URL(calls[0]?.url ?? "", "http://x");
    expect(url.pathname).toBe("/api/v1/runs/run%20one/rankings");
    expect(url.searchParams.get("metric")).toBe("npmi_xy");
    expect(url.searchParams.get("page")).toBe("2");
    expect(url.searchParams.get("page_size")).toBe("25");
    expect(url.searchParams.get("min_gap")).toBe("0.1");
    expect(url.searchParams.get("min_count_y")).toBe("5");
    expect(url.searchParams.get("search")).toBe("hat");
    expect(url.searchParams.has("max_gap")).toBe(false);
  });

  it("assembles all pages in order", async () => {
    const pages = [
      page([row("a", 0), row("b", 1)], 5, 0),
      page([row("c", 2), row("d", 3)], 5, 1),
      page([row("e", 4)], 5, 2),
    ];
    const { fetchFn } = fakeFetch((url) => {
      const pageNo = Number(new URL(url, "http://x").searchParams.get("page"));
      return { body: pages[pageNo] };
    });
    const client = new ApiClient("/api/v1", fetchFn);
    const rows = await client.fetchAllRows("r", "dp", EMPTY_FILTER, 2);
    expect(rows.map((r) => r.label)).toEqual(["a", "b", "c", "d", "e"]);
  });

  it("stops page assembly on an empty page", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ body: page([], 10, 0) }));
    const client = new ApiClient("/api/v1", fetchFn);
    const rows = await client.fetchAllRows("r", "dp", EMPTY_FILTER, 2);
    expect(rows).toEqual([]);
    expect(calls.length).toBe(1);
  });

  it("maps error payloads to ApiError with detail", async () => {
    const { fetchFn } = fakeFetch(() => ({
      status: 400,
      body: { detail: "unknown metric 'zeta'; valid: dp, sdc" },
    }));
    const client = new ApiClient("/api/v1", fetchFn);
    await expect(client.getDistribution("r", "zeta", 5)).rejects.toThrowError(
      ApiError,
    );
    await expect(client.getDistribution("r", "zeta", 5)).rejects.toThrow(
      /unknown metric/,
    );
  });

  it("sends flag updates as JSON PUT", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      body: { label: "hat", flagged: true, note: "check" },
    }));
    const client = new ApiClient("/api/v1", fetchFn);
    const state = await client.putFlag("r", "hat", true, "check");
    expect(state.flagged).toBe(true);
    expect(calls[0]?.init?.method).toBe("PUT");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({
      flagged: true,
      note: "check",
    });
    expect(calls[0]?.url).toBe("/api/v1/runs/r/flags/hat");
  });

  it("download URL carries the filter and metric", () => {
    const client = new ApiClient("/api/v1");
    const url = client.downloadUrl("r", "dp", {
      ...EMPTY_FILTER,
      minGap: 0.25,
    });
    const parsed = new URL(url, "http://x");
    expect(parsed.pathname).toBe("/api/v1/runs/r/download");
    expect(parsed.searchParams.get("metric")).toBe("dp");
    expect(parsed.searchParams.get("min_gap")).toBe("0.25");
  });

  it("download URL for an empty filter has only the metric", () => {
    const client = new ApiClient("/api/v1");
    const url = client.downloadUrl("r", "npmi_xy", { ...EMPTY_FILTER });
    expect(url).toBe("/api/v1/runs/r/download?metric=npmi_xy");
  });
});
