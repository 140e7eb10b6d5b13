import { EMPTY_FILTER, type GapFilter } from "./filters.js";
import { METRIC_IDS, type MetricId, type RunInfo } from "./types.js";

/** Client-side view state. Everything here is presentation state; all data
 * shown next to it is fetched from the API. */
export interface UiState {
  runs: RunInfo[];
  activeRunId: string | null;
  compareRunId: string | null;
  metric: MetricId;
  filter: GapFilter;
  page: number;
  pageSize: number;
  selection: string[];
  axisOrder: MetricId[];
}

export function initialState(): UiState {
  return {
    runs: [],
    activeRunId: null,
    compareRunId: null,
    metric: "npmi_xy",
    filter: { ...EMPTY_FILTER },
    page: 0,
    pageSize: 50,
    selection: [],
    axisOrder: [...METRIC_IDS],
  };
}

export function withRuns(state: UiState, runs: RunInfo[]): UiState {
  const activeRunId =
    state.activeRunId && runs.some((r) => r.id === state.activeRunId)
      ? state.activeRunId
      : (runs[0]?.id ?? null);
  return { ...state, runs, activeRunId };
}

/** Switching run resets paging, selection and the comparison run. */
export function withActiveRun(state: UiState, runId: string): UiState {
  if (runId === state.activeRunId) {
    return state;
  }
  return {
    ...state,
    activeRunId: runId,
    compareRunId: state.compareRunId === runId ? null : state.compareRunId,
    page: 0,
    selection: [],
  };
}

export function withCompareRun(state: UiState, runId: string | null): UiState {
  return { ...state, compareRunId: runId === state.activeRunId ? null : runId };
}

/** Changing metric or filter returns the table to the first page. */
export function withMetric(state: UiState, metric: MetricId): UiState {
  if (metric === state.metric) {
    return state;
  }
  return { ...state, metric, page: 0 };
}

export function withFilter(state: UiState, filter: GapFilter): UiState {
  return { ...state, filter, page: 0 };
}

export function withPage(state: UiState, page: number): UiState {
  return { ...state, page: Math.max(0, page) };
}

export function toggleSelection(state: UiState, label: string): UiState {
  const selection = state.selection.includes(label)
    ? state.selection.filter((l) => l !== label)
    : [...state.selection, label];
  return { ...state, selection };
}

/** Axis ordering is pure user state for the parallel-coordinates panel. */
export function moveAxis(state: UiState, metric: MetricId, delta: number): UiState {
  const order = [...state.axisOrder];
  const from = order.indexOf(metric);
  if (from < 0) {
    return state;
  }
  const to = Math.min(Math.max(0, from + delta), order.length - 1);
  order.splice(from, 1);
  order.splice(to, 0, metric);
  return { ...state, axisOrder: order };
}

type Listener = (state: UiState) => void;

/** Minimal observable store; render code subscribes once. */
export class Store {
  private state: UiState;
  private readonly listeners: Listener[] = [];

  constructor(state: UiState = initialState()) {
    this.state = state;
  }

  get(): UiState {
    return this.state;
  }

  update(next: UiState): void {
    if (next === this.state) {
      return;
    }
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      const index = this.listeners.indexOf(listener);
      if (index >= 0) {
        this.listeners.splice(index, 1);
      }
    };
  }
}
