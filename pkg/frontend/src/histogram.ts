import type { Distribution } from "./types.js";

/** Geometry for one histogram bar in SVG user units. */
export interface Bar {
  x: number;
  y: number;
  width: number;
  height: number;
  count: number;
  lo: number;
  hi: number;
}

/** Lay out a served distribution as bars filling a width x height box.
 * Pure geometry: counts and edges are used exactly as fetched. */
export function histogramBars(
  dist: Distribution,
  width: number,
  height: number,
  gapPx = 1,
): Bar[] {
  const n = dist.counts.length;
  if (n === 0) {
    return [];
  }
  const maxCount = Math.max(...dist.counts, 1);
  const barWidth = width / n;
  return dist.counts.map((count, i) => {
    const h = (count / maxCount) * height;
    return {
      x: i * barWidth,
      y: height - h,
      width: Math.max(barWidth - gapPx, 1),
      height: h,
      count,
      lo: dist.bin_edges[i] ?? 0,
      hi: dist.bin_edges[i + 1] ?? 0,
    };
  });
}

/** Tick positions (value + x) for the histogram's gap axis. */
export function axisTicks(
  dist: Distribution,
  width: number,
  tickCount = 5,
): { x: number; value: number }[] {
  const edges = dist.bin_edges;
  if (edges.length < 2) {
    return [];
  }
  const lo = edges[0] ?? 0;
  const hi = edges[edges.length - 1] ?? 0;
  const span = hi - lo;
  const ticks: { x: number; value: number }[] = [];
  for (let i = 0; i < tickCount; i += 1) {
    const t = tickCount === 1 ? 0 : i / (tickCount - 1);
    ticks.push({ x: t * width, value: lo + t * span });
  }
  return ticks;
}
