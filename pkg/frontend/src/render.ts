/**
 * Figure renderers for the computation CLI's CSV/JSON outputs.
 *
 * Six kinds are supported: domain diagrams, gradient-magnitude heatmaps,
 * functional surfaces, force slope comparisons, approximation error maps and
 * energy-disk error plots.  Rendering is a pure function of the input files
 * and the plot spec; identical inputs produce byte-identical SVG.
 */

import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";

import { parseCsv, requireColumns, numericColumn, stringColumn, SchemaError, Table } from "./csv.js";
import { viridis, normalizer } from "./colormap.js";
import { el, fmt, svgDocument, linearScale, colorLegend } from "./svg.js";
import { TernaryFrame, ternaryPoint, ternaryCorners } from "./ternary.js";

export type FigureKind =
  | "domain"
  | "heatmap"
  | "surface"
  | "slope"
  | "error-map"
  | "disk";

export interface PlotSpec {
  kind: FigureKind;
  /** Input data files; `slope` accepts several CSVs (one line each). */
  inputs: string[];
  /** Per-input force report JSONs for the `slope` kind (dashed lines). */
  companions?: string[];
  output?: string;
  title?: string;
  width?: number;
  height?: number;
  /** Column to color by (heatmap/surface/disk override). */
  valueColumn?: string;
  logColor?: boolean;
}

const MARGIN = 46;
const LINE_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

export function render(spec: PlotSpec): string {
  const svg = renderToString(spec, (path) => readFileSync(path, "utf8"));
  if (spec.output) {
    mkdirSync(dirname(spec.output), { recursive: true });
    writeFileSync(spec.output, svg);
  }
  return svg;
}

export function renderToString(
  spec: PlotSpec,
  read: (path: string) => string,
): string {
  if (spec.inputs.length === 0) {
    throw new SchemaError("schema-mismatch: no input files given");
  }
  switch (spec.kind) {
    case "domain":
      return renderDomain(spec, read);
    case "heatmap":
      return renderTernaryValues(spec, read, {
        defaultColumn: "grad_norm",
        defaultLog: true,
        legend: "|grad F|",
      });
    case "surface":
      return renderTernaryValues(spec, read, {
        defaultColumn: "F",
        defaultLog: false,
        legend: "F",
      });
    case "error-map":
      return renderErrorMap(spec, read);
    case "slope":
      return renderSlope(spec, read);
    case "disk":
      return renderDisk(spec, read);
    default:
      throw new SchemaError(`unknown figure kind '${spec.kind as string}'`);
  }
}

function frameFor(spec: PlotSpec, N: number): TernaryFrame {
  const width = spec.width ?? 480;
  const side = width - 2 * MARGIN - 40;
  return { N, originX: MARGIN, originY: MARGIN, side };
}

function heightFor(spec: PlotSpec): number {
  return spec.height ?? 440;
}

function titleText(spec: PlotSpec, fallback: string): string {
  return el(
    "text",
    {
      x: (spec.width ?? 480) / 2,
      y: 20,
      "font-size": 13,
      "text-anchor": "middle",
      fill: "#111",
      "font-family": "sans-serif",
    },
    [],
    escapeXml(spec.title ?? fallback),
  );
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

// ---------------------------------------------------------------------------
// domain diagrams
// ---------------------------------------------------------------------------

interface DomainFile {
  meta: { d: number; N: number; P: number };
  states: number[][];
  classification: string[];
  vertices: number[][];
}

function loadDomain(read: (p: string) => string, path: string): DomainFile {
  let obj: unknown;
  try {
    obj = JSON.parse(read(path));
  } catch (exc) {
    throw new SchemaError(`schema-mismatch: ${path} is not valid JSON`);
  }
  const domain = obj as Partial<DomainFile>;
  for (const key of ["meta", "states", "classification", "vertices"] as const) {
    if (domain[key] === undefined) {
      throw new SchemaError(
        `schema-mismatch: domain input lacks key '${key}'`,
      );
    }
  }
  return domain as DomainFile;
}

function renderDomain(
  spec: PlotSpec,
  read: (p: string) => string,
): string {
  const domain = loadDomain(read, spec.inputs[0]!);
  const { d, N, P } = domain.meta;
  if (d !== 3 && d !== 2) {
    throw new SchemaError(
      `schema-mismatch: domain rendering supports d in {2, 3}, got d=${d}`,
    );
  }
  const width = spec.width ?? 480;
  const height = heightFor(spec);
  const parts: string[] = [titleText(spec, `domain d=${d} N=${N} P=${P}`)];

  if (d === 3) {
    const frame = frameFor(spec, N);
    const corners = ternaryCorners(frame);
    parts.push(
      el("polygon", {
        points: corners.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" "),
        fill: "none",
        stroke: "#bbb",
        "stroke-dasharray": "4 3",
      }),
    );
    const hull = sortByAngle(
      domain.vertices.map((v) =>
        ternaryPoint(frame, v as [number, number, number]),
      ),
    );
    if (hull.length >= 2) {
      parts.push(
        el("polygon", {
          points: hull.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" "),
          fill: "#dbeafe",
          stroke: "#1d4ed8",
          "stroke-width": 1.2,
        }),
      );
    }
    for (const [i, state] of domain.states.entries()) {
      const [x, y] = ternaryPoint(frame, state as [number, number, number]);
      const kind = domain.classification[i]!;
      parts.push(
        el("circle", {
          cx: x,
          cy: y,
          r: kind === "vertex" ? 5 : 3.4,
          fill:
            kind === "vertex"
              ? "#1d4ed8"
              : kind === "boundary"
                ? "#60a5fa"
                : "#ffffff",
          stroke: "#1e3a8a",
          "stroke-width": 1,
        }),
      );
    }
    for (const v of domain.vertices) {
      const [x, y] = ternaryPoint(frame, v as [number, number, number]);
      parts.push(
        el(
          "text",
          {
            x,
            y: y - 9,
            "font-size": 10,
            "text-anchor": "middle",
            fill: "#1e3a8a",
            "font-family": "sans-serif",
          },
          [],
          `(${v.join(",")})`,
        ),
      );
    }
  } else {
    const scale = linearScale([0, N], [MARGIN, width - MARGIN]);
    const y0 = height / 2;
    parts.push(
      el("line", {
        x1: scale(0), y1: y0, x2: scale(N), y2: y0,
        stroke: "#bbb", "stroke-dasharray": "4 3",
      }),
    );
    const xs = domain.vertices.map((v) => scale(v[1]!));
    parts.push(
      el("line", {
        x1: Math.min(...xs), y1: y0, x2: Math.max(...xs), y2: y0,
        stroke: "#1d4ed8", "stroke-width": 3,
      }),
    );
    for (const [i, state] of domain.states.entries()) {
      const kind = domain.classification[i]!;
      parts.push(
        el("circle", {
          cx: scale(state[1]!), cy: y0,
          r: kind === "vertex" ? 5 : 3.4,
          fill: kind === "vertex" ? "#1d4ed8" : "#ffffff",
          stroke: "#1e3a8a",
        }),
        el(
          "text",
          {
            x: scale(state[1]!), y: y0 - 10, "font-size": 10,
            "text-anchor": "middle", fill: "#1e3a8a",
            "font-family": "sans-serif",
          },
          [],
          `(${state.join(",")})`,
        ),
      );
    }
  }
  return svgDocument(width, height, parts);
}

function sortByAngle(points: [number, number][]): [number, number][] {
  const cx = points.reduce((s, p) => s + p[0], 0) / points.length;
  const cy = points.reduce((s, p) => s + p[1], 0) / points.length;
  return [...points].sort(
    (a, b) => Math.atan2(a[1] - cy, a[0] - cx) - Math.atan2(b[1] - cy, b[0] - cx),
  );
}

// ---------------------------------------------------------------------------
// ternary scatter maps (heatmap / surface / error map)
// ---------------------------------------------------------------------------

function ternaryTable(
  read: (p: string) => string,
  path: string,
  kind: string,
  extra: string[],
): Table {
  const table = parseCsv(read(path));
  requireColumns(table, ["n0", "n1", "n2", ...extra], kind);
  if (table.header.includes("n3")) {
    throw new SchemaError(
      `schema-mismatch: ${kind} rendering requires exactly three modes`,
    );
  }
  return table;
}

function renderTernaryValues(
  spec: PlotSpec,
  read: (p: string) => string,
  options: { defaultColumn: string; defaultLog: boolean; legend: string },
): string {
  const column = spec.valueColumn ?? options.defaultColumn;
  const table = ternaryTable(read, spec.inputs[0]!, spec.kind, [column]);
  const values = numericColumnLenient(table, column);
  return ternaryScatter(spec, table, values, {
    log: spec.logColor ?? options.defaultLog,
    legend: options.legend,
    blackOutDegenerate: spec.kind === "heatmap",
  });
}

function renderErrorMap(spec: PlotSpec, read: (p: string) => string): string {
  const table = ternaryTable(read, spec.inputs[0]!, "error-map", [
    "F_exact",
    "F_approx",
  ]);
  const exact = numericColumn(table, "F_exact");
  const approx = numericColumn(table, "F_approx");
  const values = approx.map((v, i) => v - exact[i]!);
  return ternaryScatter(spec, table, values, {
    log: spec.logColor ?? false,
    legend: "F_approx - F_exact",
    blackOutDegenerate: false,
  });
}

/** Like numericColumn but empty cells become NaN (skipped points). */
function numericColumnLenient(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`schema-mismatch: missing column '${name}'`);
  }
  return table.rows.map((row) => {
    const cell = row[idx]!.trim();
    return cell === "" ? Number.NaN : Number(cell);
  });
}

function ternaryScatter(
  spec: PlotSpec,
  table: Table,
  values: number[],
  options: { log: boolean; legend: string; blackOutDegenerate: boolean },
): string {
  const n0 = numericColumn(table, "n0");
  const n1 = numericColumn(table, "n1");
  const n2 = numericColumn(table, "n2");
  const N = Math.round(n0[0]! + n1[0]! + n2[0]!);
  const degenerate = table.header.includes("degenerate_flag")
    ? stringColumn(table, "degenerate_flag")
    : table.rows.map(() => "0");
  const frame = frameFor(spec, N);
  const width = spec.width ?? 480;
  const height = heightFor(spec);
  const norm = normalizer(
    values.filter((v, i) => Number.isFinite(v) && degenerate[i] !== "1"),
    options.log,
  );
  const radius = Math.max(
    1.4,
    (0.62 * frame.side) / Math.sqrt(values.length) / 1.2,
  );
  const parts: string[] = [titleText(spec, options.legend)];
  const corners = ternaryCorners(frame);
  parts.push(
    el("polygon", {
      points: corners.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" "),
      fill: "none",
      stroke: "#999",
    }),
  );
  for (let i = 0; i < values.length; i++) {
    const point: [number, number, number] = [n0[i]!, n1[i]!, n2[i]!];
    const [x, y] = ternaryPoint(frame, point);
    const isDegenerate = options.blackOutDegenerate && degenerate[i] === "1";
    if (!Number.isFinite(values[i]!) && !isDegenerate) continue;
    parts.push(
      el("circle", {
        cx: x,
        cy: y,
        r: radius,
        fill: isDegenerate ? "#000000" : viridis(norm(values[i]!)),
      }),
    );
  }
  const finite = values.filter((v) => Number.isFinite(v));
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  parts.push(
    colorLegend(width - MARGIN - 8, MARGIN, frame.side * 0.6, viridis, [
      fmt(lo),
      fmt(hi),
    ]),
    el(
      "text",
      {
        x: width - MARGIN - 8,
        y: MARGIN + frame.side * 0.6 + 16,
        "font-size": 10,
        fill: "#333",
        "font-family": "sans-serif",
      },
      [],
      escapeXml(options.legend),
    ),
  );
  return svgDocument(width, height, parts);
}

// ---------------------------------------------------------------------------
// slope comparison
// ---------------------------------------------------------------------------

interface ForceReport {
  G: number;
  F_on_facet: number;
}

function renderSlope(spec: PlotSpec, read: (p: string) => string): string {
  const width = spec.width ?? 480;
  const height = heightFor(spec);
  const series: {
    label: string;
    xs: number[];
    ys: number[];
    force?: ForceReport;
  }[] = [];
  for (const [i, path] of spec.inputs.entries()) {
    const table = parseCsv(read(path));
    requireColumns(table, ["sqrt_eps", "F"], "slope");
    const particle = Number(table.meta["N"] ?? "1");
    const scaleBy = Number.isFinite(particle) && particle > 0 ? particle : 1;
    const xs = numericColumn(table, "sqrt_eps");
    const ys = numericColumn(table, "F").map((v) => v / scaleBy);
    let force: ForceReport | undefined;
    const companion = spec.companions?.[i];
    if (companion) {
      const report = JSON.parse(read(companion)) as Partial<ForceReport>;
      if (
        typeof report.G !== "number" ||
        typeof report.F_on_facet !== "number"
      ) {
        throw new SchemaError(
          "schema-mismatch: force report lacks numeric 'G'/'F_on_facet'",
        );
      }
      force = { G: report.G / scaleBy, F_on_facet: report.F_on_facet / scaleBy };
    }
    series.push({ label: `N = ${table.meta["N"] ?? "?"}`, xs, ys, force });
  }
  const allX = series.flatMap((s) => s.xs);
  const allY = series.flatMap((s) =>
    s.ys.concat(s.force ? [s.force.F_on_facet] : []),
  );
  const x = linearScale([0, Math.max(...allX) * 1.05], [MARGIN, width - 24]);
  const y = linearScale(
    [Math.min(...allY), Math.max(...allY)],
    [height - MARGIN, 34],
  );
  const parts: string[] = [titleText(spec, "F/N against sqrt(eps)")];
  parts.push(axes(x, y, width, height, "sqrt(eps)", "F/N"));
  for (const [i, s] of series.entries()) {
    const color = LINE_COLORS[i % LINE_COLORS.length]!;
    const pts = s.xs
      .map((v, j) => `${fmt(x(v))},${fmt(y(s.ys[j]!))}`)
      .join(" ");
    parts.push(
      el("polyline", {
        points: pts,
        fill: "none",
        stroke: color,
        "stroke-width": 1.6,
      }),
    );
    if (s.force) {
      const xEnd = Math.max(...s.xs);
      parts.push(
        el("line", {
          x1: x(0),
          y1: y(s.force.F_on_facet),
          x2: x(xEnd),
          y2: y(s.force.F_on_facet + s.force.G * xEnd),
          stroke: color,
          "stroke-dasharray": "6 4",
          "stroke-width": 1.2,
        }),
      );
    }
    parts.push(
      el(
        "text",
        {
          x: width - 110,
          y: 40 + 14 * i,
          "font-size": 11,
          fill: color,
          "font-family": "sans-serif",
        },
        [],
        escapeXml(s.label),
      ),
    );
  }
  return svgDocument(width, height, parts);
}

function axes(
  x: ReturnType<typeof linearScale>,
  y: ReturnType<typeof linearScale>,
  width: number,
  height: number,
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [
    el("line", {
      x1: MARGIN, y1: height - MARGIN, x2: width - 24, y2: height - MARGIN,
      stroke: "#333",
    }),
    el("line", {
      x1: MARGIN, y1: height - MARGIN, x2: MARGIN, y2: 34, stroke: "#333",
    }),
  ];
  for (const t of x.ticks) {
    parts.push(
      el("line", {
        x1: x(t), y1: height - MARGIN, x2: x(t), y2: height - MARGIN + 4,
        stroke: "#333",
      }),
      el(
        "text",
        {
          x: x(t), y: height - MARGIN + 15, "font-size": 9,
          "text-anchor": "middle", fill: "#333",
          "font-family": "sans-serif",
        },
        [],
        trimTick(t),
      ),
    );
  }
  for (const t of y.ticks) {
    parts.push(
      el("line", {
        x1: MARGIN - 4, y1: y(t), x2: MARGIN, y2: y(t), stroke: "#333",
      }),
      el(
        "text",
        {
          x: MARGIN - 6, y: y(t) + 3, "font-size": 9, "text-anchor": "end",
          fill: "#333", "font-family": "sans-serif",
        },
        [],
        trimTick(t),
      ),
    );
  }
  parts.push(
    el(
      "text",
      {
        x: (MARGIN + width - 24) / 2, y: height - 10, "font-size": 11,
        "text-anchor": "middle", fill: "#111", "font-family": "sans-serif",
      },
      [],
      escapeXml(xLabel),
    ),
    el(
      "text",
      {
        x: 14, y: 28, "font-size": 11, fill: "#111",
        "font-family": "sans-serif",
      },
      [],
      escapeXml(yLabel),
    ),
  );
  return parts.join("");
}

function trimTick(t: number): string {
  const s = t.toPrecision(3);
  return String(Number(s));
}

// ---------------------------------------------------------------------------
// energy-disk error plot
// ---------------------------------------------------------------------------

function renderDisk(spec: PlotSpec, read: (p: string) => string): string {
  const table = parseCsv(read(spec.inputs[0]!));
  requireColumns(table, ["r", "theta", "E_exact", "E_approx", "delta_E"], "disk");
  const column = spec.valueColumn ?? "delta_E";
  const rs = numericColumn(table, "r");
  const thetas = numericColumn(table, "theta");
  const values = numericColumn(table, column);
  const width = spec.width ?? 480;
  const height = heightFor(spec);
  const cx = width / 2 - 20;
  const cy = height / 2 + 10;
  const rUnique = unique(rs);
  const tUnique = unique(thetas);
  const rMax = rUnique[rUnique.length - 1]!;
  const radius = Math.min(width, height) / 2 - MARGIN - 10;
  const rScale = (r: number) => (r / (rMax || 1)) * radius;
  const dTheta = tUnique.length > 1 ? tUnique[1]! - tUnique[0]! : 2 * Math.PI;
  const norm = normalizer(values, spec.logColor ?? false);
  const parts: string[] = [titleText(spec, `energy disk: ${column}`)];
  const rStep = rUnique.length > 1 ? rUnique[1]! - rUnique[0]! : rMax || 1;
  for (let i = 0; i < values.length; i++) {
    const rLo = rScale(Math.max(rs[i]! - rStep / 2, 0));
    const rHi = rScale(rs[i]! + rStep / 2);
    const t0 = thetas[i]! - dTheta / 2;
    const t1 = thetas[i]! + dTheta / 2;
    parts.push(wedge(cx, cy, rLo, rHi, t0, t1, viridis(norm(values[i]!))));
  }
  parts.push(
    el("circle", {
      cx, cy, r: radius + rScale(rStep / 2) > radius ? radius + 1 : radius,
      fill: "none", stroke: "#777",
    }),
    colorLegend(width - MARGIN - 4, MARGIN, radius, viridis, [
      fmt(Math.min(...values)),
      fmt(Math.max(...values)),
    ]),
  );
  return svgDocument(width, height, parts);
}

function unique(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function wedge(
  cx: number,
  cy: number,
  rLo: number,
  rHi: number,
  t0: number,
  t1: number,
  fill: string,
): string {
  const point = (r: number, t: number): [number, number] => [
    cx + r * Math.cos(t),
    cy - r * Math.sin(t),
  ];
  const [x0, y0] = point(rHi, t0);
  const [x1, y1] = point(rHi, t1);
  const large = t1 - t0 > Math.PI ? 1 : 0;
  if (rLo <= 1e-9) {
    const d =
      `M ${fmt(cx)} ${fmt(cy)} L ${fmt(x0)} ${fmt(y0)} ` +
      `A ${fmt(rHi)} ${fmt(rHi)} 0 ${large} 0 ${fmt(x1)} ${fmt(y1)} Z`;
    return el("path", { d, fill, stroke: "none" });
  }
  const [x2, y2] = point(rLo, t1);
  const [x3, y3] = point(rLo, t0);
  const d =
    `M ${fmt(x0)} ${fmt(y0)} ` +
    `A ${fmt(rHi)} ${fmt(rHi)} 0 ${large} 0 ${fmt(x1)} ${fmt(y1)} ` +
    `L ${fmt(x2)} ${fmt(y2)} ` +
    `A ${fmt(rLo)} ${fmt(rLo)} 0 ${large} 1 ${fmt(x3)} ${fmt(y3)} Z`;
  return el("path", { d, fill, stroke: "none" });
}
