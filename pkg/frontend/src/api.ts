import type {
  Distribution,
  FlagState,
  LabelDetail,
  RankingRow,
  RankingsPage,
  RunInfo,
} from "./types.js";
import { filterToParams, type GapFilter } from "./filters.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the explorer API. All numbers rendered by the UI
 * come through here; nothing is recomputed client-side. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "/api/v1",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (typeof body.detail === "string") {
          detail = body.detail;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async listRuns(): Promise<RunInfo[]> {
    const body = await this.request<{ runs: RunInfo[] }>("/runs");
    return body.runs;
  }

  async getRankings(
    runId: string,
    metric: string,
    page: number,
    pageSize: number,
    filter: GapFilter,
  ): Promise<RankingsPage> {
    const params = filterToParams(filter);
    params.set("metric", metric);
    params.set("page", String(page));
    params.set("page_size", String(pageSize));
    return this.request<RankingsPage>(
      `/runs/${encodeURIComponent(runId)}/rankings?${params}`,
    );
  }

  /** Every row of a ranking, assembled by walking the pages in order. */
  async fetchAllRows(
    runId: string,
    metric: string,
    filter: GapFilter,
    pageSize = 200,
  ): Promise<RankingRow[]> {
    const rows: RankingRow[] = [];
    for (let page = 0; ; page += 1) {
      const body = await this.getRankings(runId, metric, page, pageSize, filter);
      rows.push(...body.rows);
      if (rows.length >= body.total || body.rows.length === 0) {
        return rows;
      }
    }
  }

  async getDistribution(
    runId: string,
    metric: string,
    bins: number,
  ): Promise<Distribution> {
    const params = new URLSearchParams({ metric, bins: String(bins) });
    return this.request<Distribution>(
      `/runs/${encodeURIComponent(runId)}/distribution?${params}`,
    );
  }

  async getLabel(runId: string, label: string): Promise<LabelDetail> {
    return this.request<LabelDetail>(
      `/runs/${encodeURIComponent(runId)}/labels/${encodeURIComponent(label)}`,
    );
  }

  async putFlag(
    runId: string,
    label: string,
    flagged: boolean,
    note: string,
  ): Promise<FlagState> {
    return this.request<FlagState>(
      `/runs/${encodeURIComponent(runId)}/flags/${encodeURIComponent(label)}`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ flagged, note }),
      },
    );
  }

  /** Href for the CSV download of the current filtered view. */
  downloadUrl(runId: string, metric: string, filter: GapFilter): string {
    const params = filterToParams(filter);
    params.set("metric", metric);
    return `${this.baseUrl}/runs/${encodeURIComponent(runId)}/download?${params}`;
  }
}
