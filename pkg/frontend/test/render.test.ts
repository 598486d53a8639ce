import { mkdtempSync, readFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { SchemaError } from "../src/csv.js";
import { render, renderToString, PlotSpec } from "../src/render.js";
import { ternaryPoint, ternaryCorners } from "../src/ternary.js";
import { viridis } from "../src/colormap.js";

const FIXTURES = join(__dirname, "..", "fixtures");

function fixture(name: string): string {
  return join(FIXTURES, name);
}

describe("ternary layout", () => {
  const frame = { N: 3, originX: 0, originY: 0, side: 100 };

  it("places the condensate vertices per convention", () => {
    const [v0, v1, v2] = ternaryCorners(frame);
    expect(v0[0]).toBeCloseTo(0); // (N,0,0) bottom-left
    expect(v0[1]).toBeCloseTo(Math.sqrt(3) * 50);
    expect(v1[0]).toBeCloseTo(100); // (0,N,0) bottom-right
    expect(v2[1]).toBeCloseTo(0); // (0,0,N) top
  });

  it("maps the barycenter to the centroid", () => {
    const [x, y] = ternaryPoint(frame, [1, 1, 1]);
    expect(x).toBeCloseTo(50);
    expect(y).toBeCloseTo((Math.sqrt(3) * 100) / 3, 3);
  });
});

describe("colormap", () => {
  it("is clamped and monotone in brightness ends", () => {
    expect(viridis(0)).toBe("rgb(68,1,84)");
    expect(viridis(1)).toBe("rgb(253,231,37)");
    expect(viridis(-5)).toBe(viridis(0));
    expect(viridis(7)).toBe(viridis(1));
  });
});

describe("renderers", () => {
  it("draws the triangle domain with labeled vertices", () => {
    const svg = render({ kind: "domain", inputs: [fixture("domain_331.json")] });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("(2,1,0)");
    expect(svg).toContain("(0,2,1)");
    expect(svg).toContain("(1,0,2)");
    expect((svg.match(/<polygon/g) ?? []).length).toBeGreaterThanOrEqual(2);
  });

  it("draws interior lattice points for the larger domain", () => {
    const svg = render({
      kind: "domain",
      inputs: [fixture("domain_3_12_0.json")],
    });
    const circles = (svg.match(/<circle/g) ?? []).length;
    expect(circles).toBe(31); // all configuration states of (3,12,0)
  });

  it("renders a gradient heatmap with degenerate points in black", () => {
    const svg = render({ kind: "heatmap", inputs: [fixture("tscan_331.csv")] });
    expect(svg).toContain("rgb(");
    expect(svg).toContain("#000000");
  });

  it("renders a functional surface", () => {
    const svg = render({
      kind: "surface",
      inputs: [fixture("functional_331.csv")],
    });
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThan(300);
  });

  it("renders the approximation error map", () => {
    const svg = render({
      kind: "error-map",
      inputs: [fixture("approx_functional.csv")],
    });
    expect(svg).toContain("F_approx - F_exact");
  });

  it("renders slope lines with the dashed closed-form prediction", () => {
    const svg = render({
      kind: "slope",
      inputs: [fixture("slope_360.csv")],
      companions: [fixture("force_360.json")],
    });
    expect(svg).toContain("polyline");
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("N = 6");
  });

  it("renders the energy disk as colored wedges", () => {
    const svg = render({ kind: "disk", inputs: [fixture("energy_disk.csv")] });
    expect((svg.match(/<path/g) ?? []).length).toBe(96); // 6 radii x 16 angles
  });

  it("writes the output file", () => {
    const out = join(mkdtempSync(join(tmpdir(), "fig-")), "fig.svg");
    const svg = render({
      kind: "domain",
      inputs: [fixture("domain_331.json")],
      output: out,
    });
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toBe(svg);
  });
});

describe("schema validation", () => {
  const reader = (content: string) => () => content;

  it("rejects an empty grid file", () => {
    expect(() =>
      renderToString(
        { kind: "surface", inputs: ["empty.csv"] },
        reader(""),
      ),
    ).toThrow(SchemaError);
  });

  it("names the missing column", () => {
    const csv = "n0,n1,n2,grad_norm\n1,1,1,0.5\n";
    expect(() =>
      renderToString({ kind: "surface", inputs: ["x.csv"] }, reader(csv)),
    ).toThrow(/column 'F'/);
  });

  it("rejects four-mode data for ternary plots", () => {
    const csv = "n0,n1,n2,n3,F\n1,1,1,1,0.5\n";
    expect(() =>
      renderToString({ kind: "surface", inputs: ["x.csv"] }, reader(csv)),
    ).toThrow(/three modes/);
  });

  it("rejects a force report without G", () => {
    const spec: PlotSpec = {
      kind: "slope",
      inputs: ["s.csv"],
      companions: ["f.json"],
    };
    const files: Record<string, string> = {
      "s.csv": "# N = 6\nsqrt_eps,F\n0.001,10\n0.002,9.9\n",
      "f.json": "{}",
    };
    expect(() => renderToString(spec, (p) => files[p]!)).toThrow(
      /'G'\/'F_on_facet'/,
    );
  });

  it("rejects invalid domain JSON", () => {
    expect(() =>
      renderToString(
        { kind: "domain", inputs: ["d.json"] },
        reader("{\"meta\": {}}"),
      ),
    ).toThrow(/lacks key 'states'/);
  });
});
