/** Viridis-style sequential colormap, linearly interpolated between stops. */

const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function viridis(t: number): string {
  const x = Math.min(Math.max(t, 0), 1) * (STOPS.length - 1);
  const i = Math.min(Math.floor(x), STOPS.length - 2);
  const f = x - i;
  const a = STOPS[i]!;
  const b = STOPS[i + 1]!;
  const channel = (k: 0 | 1 | 2) => Math.round(a[k] + f * (b[k] - a[k]));
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}

/** Map values to [0,1] linearly, or logarithmically for positive data. */
export function normalizer(
  values: number[],
  log: boolean,
): (v: number) => number {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) return () => 0;
  if (log) {
    const positive = finite.filter((v) => v > 0);
    const lo = Math.log10(Math.min(...positive));
    const hi = Math.log10(Math.max(...positive));
    const span = hi - lo || 1;
    return (v) => (v > 0 ? (Math.log10(v) - lo) / span : 0);
  }
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  const span = hi - lo || 1;
  return (v) => (v - lo) / span;
}
