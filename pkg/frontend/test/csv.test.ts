import { describe, expect, it } from "vitest";

import { parseCsv, requireColumns, numericColumn, SchemaError } from "../src/csv.js";

const SAMPLE = `# tool = bgrdmft 0.1.0
# N = 6
sqrt_eps,F
0.001,9.99
0.01,9.93
`;

describe("parseCsv", () => {
  it("splits metadata, header and rows", () => {
    const table = parseCsv(SAMPLE);
    expect(table.meta["N"]).toBe("6");
    expect(table.header).toEqual(["sqrt_eps", "F"]);
    expect(table.rows).toHaveLength(2);
  });

  it("rejects empty files", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
    expect(() => parseCsv("# only = comments\n")).toThrow(SchemaError);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1,2,3\n")).toThrow(/row 1/);
  });
});

describe("requireColumns", () => {
  it("names the missing column", () => {
    const table = parseCsv(SAMPLE);
    expect(() => requireColumns(table, ["sqrt_eps", "G"], "slope")).toThrow(
      /column 'G'/,
    );
  });

  it("rejects header-only files", () => {
    const table = parseCsv("a,b\n");
    expect(() => requireColumns(table, ["a"], "x")).toThrow(/no data rows/);
  });
});

describe("numericColumn", () => {
  it("parses numbers and flags junk with row context", () => {
    const table = parseCsv("a,b\n1,2\n3,oops\n");
    expect(numericColumn(table, "a")).toEqual([1, 3]);
    expect(() => numericColumn(table, "b")).toThrow(/row 2/);
  });
});
