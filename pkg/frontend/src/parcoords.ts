/** Parallel-coordinates geometry: one vertical axis per metric, one
 * polyline per label, using oriented gaps exactly as fetched. Labels with
 * no defined gap under some metric get a broken line there (null vertex).
 */

export interface AxisGeometry {
  metric: string;
  x: number;
  min: number;
  max: number;
}

export type Vertex = { x: number; y: number } | null;

export interface LabelLine {
  label: string;
  vertices: Vertex[];
}

export interface ParcoordsLayout {
  axes: AxisGeometry[];
  lines: LabelLine[];
}

/** values: label -> (metric -> oriented gap); missing entries break lines. */
export function parcoordsLayout(
  axisOrder: readonly string[],
  values: ReadonlyMap<string, ReadonlyMap<string, number>>,
  width: number,
  height: number,
  pad = 8,
): ParcoordsLayout {
  const axes: AxisGeometry[] = [];
  const step = axisOrder.length > 1 ? (width - 2 * pad) / (axisOrder.length - 1) : 0;
  for (const [i, metric] of axisOrder.entries()) {
    let min = Number.POSITIVE_INFINITY;
    let max = Number.NEGATIVE_INFINITY;
    for (const perMetric of values.values()) {
      const v = perMetric.get(metric);
      if (v !== undefined) {
        min = Math.min(min, v);
        max = Math.max(max, v);
      }
    }
    if (min > max) {
      min = 0;
      max = 0;
    }
    axes.push({ metric, x: pad + i * step, min, max });
  }

  const lines: LabelLine[] = [];
  for (const [label, perMetric] of values) {
    const vertices: Vertex[] = axes.map((axis) => {
      const v = perMetric.get(axis.metric);
      if (v === undefined) {
        return null;
      }
      const span = axis.max - axis.min;
      const t = span === 0 ? 0.5 : (v - axis.min) / span;
      // larger oriented gap renders higher up
      return { x: axis.x, y: pad + (1 - t) * (height - 2 * pad) };
    });
    lines.push({ label, vertices });
  }
  return { axes, lines };
}

/** SVG path string for a (possibly broken) polyline. */
export function verticesToPath(vertices: readonly Vertex[]): string {
  const parts: string[] = [];
  let penDown = false;
  for (const v of vertices) {
    if (v === null) {
      penDown = false;
      continue;
    }
    parts.push(`${penDown ? "L" : "M"}${round2(v.x)},${round2(v.y)}`);
    penDown = true;
  }
  return parts.join(" ");
}

function round2(value: number): number {
  return Math.round(value * 100) / 100;
}
