// Wire types for MiniFn values and outcomes, shared with the server's JSON
// schema, plus canonical literal rendering and parsing so users can paste
// values between the UI and the CLI.

export type TypeJson = string | { list: TypeJson | null };

export type ValueJson =
  | { type: "int"; value: number }
  | { type: "float"; value: number | string }
  | { type: "bool"; value: boolean }
  | { type: "str"; value: string }
  | { type: "list"; value: ValueJson[]; elem?: TypeJson };

export type OutcomeJson =
  | { kind: "value"; value: ValueJson }
  | { kind: "error"; error_kind: string; message: string }
  | { kind: "timeout" };

function formatFloat(raw: number | string): string {
  if (raw === "NaN") return "nan";
  if (raw === "Inf") return "inf";
  if (raw === "-Inf") return "-inf";
  const x = raw as number;
  if (Number.isInteger(x) && Math.abs(x) < 1e16) {
    return Object.is(x, -0) ? "-0.0" : `${x}.0`;
  }
  return x.toString();
}

export function formatValue(v: ValueJson): string {
  switch (v.type) {
    case "int":
      return v.value.toString();
    case "float":
      return formatFloat(v.value);
    case "bool":
      return v.value ? "true" : "false";
    case "str":
      return JSON.stringify(v.value);
    case "list":
      return `[${v.value.map(formatValue).join(", ")}]`;
  }
}

export function outcomeSummary(o: OutcomeJson): string {
  if (o.kind === "value") return formatValue(o.value);
  if (o.kind === "error") return `error(${o.error_kind})`;
  return "timeout";
}

export class LiteralError extends Error {}

class Cursor {
  constructor(public text: string, public pos = 0) {}

  skipSpace(): void {
    while (this.pos < this.text.length && /\s/.test(this.text[this.pos])) this.pos++;
  }

  peek(): string {
    return this.text[this.pos] ?? "";
  }

  expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      throw new LiteralError(`expected '${ch}' at position ${this.pos}`);
    }
    this.pos++;
  }
}

function elemType(expected?: TypeJson): TypeJson | undefined {
  if (expected && typeof expected === "object" && "list" in expected) {
    return expected.list ?? undefined;
  }
  return undefined;
}

function parseOne(c: Cursor, expected?: TypeJson): ValueJson {
  c.skipSpace();
  const ch = c.peek();
  if (ch === "[") {
    c.expect("[");
    const items: ValueJson[] = [];
    c.skipSpace();
    if (c.peek() !== "]") {
      for (;;) {
        items.push(parseOne(c, elemType(expected)));
        c.skipSpace();
        if (c.peek() === ",") {
          c.expect(",");
          continue;
        }
        break;
      }
    }
    c.expect("]");
    const out: ValueJson = { type: "list", value: items };
    const et = elemType(expected);
    if (et !== undefined) out.elem = et;
    return out;
  }
  if (ch === '"') {
    const rest = c.text.slice(c.pos);
    const m = rest.match(/^"(\\.|[^"\\])*"/);
    if (!m) throw new LiteralError("unterminated string literal");
    c.pos += m[0].length;
    return { type: "str", value: JSON.parse(m[0]) as string };
  }
  const word = c.text.slice(c.pos).match(/^-?[a-zA-Z0-9_.+-]+/);
  if (!word) throw new LiteralError(`unexpected character '${ch}'`);
  const tok = word[0];
  c.pos += tok.length;
  if (tok === "true" || tok === "false") return { type: "bool", value: tok === "true" };
  if (tok === "nan") return { type: "float", value: "NaN" };
  if (tok === "inf") return { type: "float", value: "Inf" };
  if (tok === "-inf") return { type: "float", value: "-Inf" };
  if (!/^-?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/.test(tok)) {
    throw new LiteralError(`not a literal: '${tok}'`);
  }
  const isFloat = tok.includes(".") || tok.includes("e") || tok.includes("E") || expected === "float";
  if (isFloat) return { type: "float", value: Number(tok) };
  return { type: "int", value: Number(tok) };
}

// Parse one literal in the same surface syntax reports use. The expected
// type only disambiguates bare integers (e.g. "3" as a Float) and empty
// list element types; it never silently coerces mismatches.
export function parseLiteral(text: string, expected?: TypeJson): ValueJson {
  const c = new Cursor(text);
  const v = parseOne(c, expected);
  c.skipSpace();
  if (c.pos !== c.text.length) {
    throw new LiteralError(`trailing input after literal: '${c.text.slice(c.pos)}'`);
  }
  return v;
}
