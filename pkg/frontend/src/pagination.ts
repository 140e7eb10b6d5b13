/** Page arithmetic for the rankings table. Pages are 0-based, matching the
 * API. */

export interface PageState {
  page: number;
  pageSize: number;
  total: number;
}

export function pageCount(state: PageState): number {
  if (state.total <= 0) {
    return 1;
  }
  return Math.ceil(state.total / state.pageSize);
}

export function clampPage(page: number, state: PageState): number {
  return Math.min(Math.max(0, page), pageCount(state) - 1);
}

/** 1-based "showing a-b of n" summary for the footer. */
export function pageSummary(state: PageState, rowsOnPage: number): string {
  if (state.total === 0) {
    return "no rows";
  }
  const first = state.page * state.pageSize + 1;
  const last = state.page * state.pageSize + rowsOnPage;
  return `${first}–${last} of ${state.total}`;
}
