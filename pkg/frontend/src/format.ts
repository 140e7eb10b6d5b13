/** Display formatting only; raw values always come from the API. */

export function formatGap(value: number): string {
  if (!Number.isFinite(value)) {
    return "—";
  }
  return value.toPrecision(6);
}

export function formatCount(value: number): string {
  return value.toLocaleString("en-US");
}

/** Short bin label like "[-0.25, 0.41)". */
export function formatRange(lo: number, hi: number): string {
  return `[${lo.toPrecision(3)}, ${hi.toPrecision(3)})`;
}
