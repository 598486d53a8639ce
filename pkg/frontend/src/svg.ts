/**
 * Minimal deterministic SVG assembly: plain string building with fixed
 * number formatting, no timestamps, no randomness.
 */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  const open = parts.length ? `<${tag} ${parts}>` : `<${tag}>`;
  if (children.length === 0 && text === undefined) {
    return parts.length ? `<${tag} ${parts}/>` : `<${tag}/>`;
  }
  return `${open}${text ?? ""}${children.join("")}</${tag}>`;
}

export function svgDocument(
  width: number,
  height: number,
  children: string[],
): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">` +
    children.join("") +
    `</svg>\n`
  );
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 5,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  const step = niceStep(span / Math.max(tickCount, 1));
  const ticks: number[] = [];
  for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-12; t += step) {
    ticks.push(Number(t.toFixed(10)));
  }
  fn.ticks = ticks;
  return fn;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(raw) || 1)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

export function colorLegend(
  x: number,
  y: number,
  height: number,
  colormap: (t: number) => string,
  labels: [string, string],
): string {
  const steps = 24;
  const bars: string[] = [];
  for (let i = 0; i < steps; i++) {
    bars.push(
      el("rect", {
        x,
        y: y + height - ((i + 1) * height) / steps,
        width: 12,
        height: height / steps + 0.5,
        fill: colormap(i / (steps - 1)),
      }),
    );
  }
  bars.push(
    el(
      "text",
      { x: x + 16, y: y + height, "font-size": 10, fill: "#333" },
      [],
      labels[0],
    ),
    el(
      "text",
      { x: x + 16, y: y + 8, "font-size": 10, fill: "#333" },
      [],
      labels[1],
    ),
  );
  return bars.join("");
}
