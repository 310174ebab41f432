import { describe, expect, it } from "vitest";

import { LiteralError, formatValue, outcomeSummary, parseLiteral } from "./values";

describe("formatValue", () => {
  it("renders ints, bools and strings canonically", () => {
    expect(formatValue({ type: "int", value: -7 })).toBe("-7");
    expect(formatValue({ type: "bool", value: true })).toBe("true");
    expect(formatValue({ type: "str", value: 'a"b' })).toBe('"a\\"b"');
  });

  it("renders floats with a decimal point and special names", () => {
    expect(formatValue({ type: "float", value: 0 })).toBe("0.0");
    expect(formatValue({ type: "float", value: 3.7 })).toBe("3.7");
    expect(formatValue({ type: "float", value: -2 })).toBe("-2.0");
    expect(formatValue({ type: "float", value: "NaN" })).toBe("nan");
    expect(formatValue({ type: "float", value: "Inf" })).toBe("inf");
    expect(formatValue({ type: "float", value: "-Inf" })).toBe("-inf");
  });

  it("renders lists recursively", () => {
    expect(
      formatValue({
        type: "list",
        value: [
          { type: "float", value: 0 },
          { type: "float", value: "NaN" },
        ],
      }),
    ).toBe("[0.0, nan]");
    expect(formatValue({ type: "list", value: [] })).toBe("[]");
  });
});

describe("outcomeSummary", () => {
  it("covers all three outcome kinds", () => {
    expect(outcomeSummary({ kind: "value", value: { type: "int", value: 3 } })).toBe("3");
    expect(outcomeSummary({ kind: "error", error_kind: "UserRaised", message: "boom" })).toBe(
      "error(UserRaised)",
    );
    expect(outcomeSummary({ kind: "timeout" })).toBe("timeout");
  });
});

describe("parseLiteral", () => {
  it("round-trips through formatValue", () => {
    for (const text of ["0.0", "-7", "nan", "-inf", "true", '"hi"', "[1, 2]", "[nan, 0.0]", "[]"]) {
      expect(formatValue(parseLiteral(text))).toBe(text);
    }
  });

  it("uses the expected type to lift bare integers to floats", () => {
    expect(parseLiteral("3", "float")).toEqual({ type: "float", value: 3 });
    expect(parseLiteral("3")).toEqual({ type: "int", value: 3 });
    expect(parseLiteral("[]", { list: "float" })).toEqual({
      type: "list",
      value: [],
      elem: "float",
    });
  });

  it("parses nested lists with element coercion", () => {
    expect(parseLiteral("[1, 2.5]", { list: "float" })).toEqual({
      type: "list",
      value: [
        { type: "float", value: 1 },
        { type: "float", value: 2.5 },
      ],
      elem: "float",
    });
  });

  it("rejects junk with LiteralError", () => {
    for (const bad of ["", "wat", "[1,", '"open', "1 2", "--3"]) {
      expect(() => parseLiteral(bad)).toThrow(LiteralError);
    }
  });
});
