/*
  Canonical JSON, matched byte for byte with the engine's writer.

  The engine saves scenario documents as JSON with sorted keys, two-space
  indent, ASCII-escaped strings, and floats printed as shortest round-trip
  literals in CPython repr format.  Plain JSON.stringify gets none of that
  right (it drops the ".0" on whole floats, switches to exponent notation
  at different magnitudes, and leaves non-ASCII characters unescaped), so
  this module carries its own reader and writer.

  The reader keeps the int/float distinction of each number token, which
  the engine's loader relies on: "400" is an integer, "400.0" is not.
*/

/** Number token that remembers whether it was written as an integer. */
export class JsonNum {
  constructor(
    readonly value: number,
    readonly isInt: boolean,
  ) {}
}

export type JsonValue =
  | null
  | boolean
  | string
  | JsonNum
  | JsonValue[]
  | { [key: string]: JsonValue };

export class JsonSyntaxError extends Error {
  constructor(
    message: string,
    readonly line: number,
    readonly column: number,
  ) {
    super(`malformed JSON at line ${line}, column ${column}: ${message}`);
    this.name = "JsonSyntaxError";
  }
}

/** Name used in loader error messages, mirroring the engine's wording. */
export function typeName(v: JsonValue): string {
  if (v === null) return "NoneType";
  if (typeof v === "boolean") return "bool";
  if (typeof v === "string") return "str";
  if (v instanceof JsonNum) return v.isInt ? "int" : "float";
  if (Array.isArray(v)) return "list";
  return "dict";
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
  pos = 0;

  constructor(readonly text: string) {}

  fail(message: string, at = this.pos): never {
    let line = 1;
    let col = 1;
    for (let i = 0; i < at && i < this.text.length; i++) {
      if (this.text[i] === "\n") {
        line += 1;
        col = 1;
      } else {
        col += 1;
      }
    }
    throw new JsonSyntaxError(message, line, col);
  }

  skipWs(): void {
    while (this.pos < this.text.length && " \t\n\r".includes(this.text[this.pos])) {
      this.pos += 1;
    }
  }

  parseValue(): JsonValue {
    this.skipWs();
    if (this.pos >= this.text.length) this.fail("expecting value");
    const c = this.text[this.pos];
    if (c === "{") return this.parseObject();
    if (c === "[") return this.parseArray();
    if (c === '"') return this.parseString();
    if (c === "-" || (c >= "0" && c <= "9")) return this.parseNumber();
    if (this.text.startsWith("true", this.pos)) {
      this.pos += 4;
      return true;
    }
    if (this.text.startsWith("false", this.pos)) {
      this.pos += 5;
      return false;
    }
    if (this.text.startsWith("null", this.pos)) {
      this.pos += 4;
      return null;
    }
    // The engine's reader accepts these extensions, so accept them too.
    if (this.text.startsWith("NaN", this.pos)) {
      this.pos += 3;
      return new JsonNum(NaN, false);
    }
    if (this.text.startsWith("Infinity", this.pos)) {
      this.pos += 8;
      return new JsonNum(Infinity, false);
    }
    if (this.text.startsWith("-Infinity", this.pos)) {
      this.pos += 9;
      return new JsonNum(-Infinity, false);
    }
    this.fail("expecting value");
  }

  parseObject(): { [key: string]: JsonValue } {
    this.pos += 1; // {
    const out: { [key: string]: JsonValue } = {};
    this.skipWs();
    if (this.text[this.pos] === "}") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      this.skipWs();
      if (this.text[this.pos] !== '"') this.fail("expecting property name in double quotes");
      const key = this.parseString();
      this.skipWs();
      if (this.text[this.pos] !== ":") this.fail("expecting ':' delimiter");
      this.pos += 1;
      out[key] = this.parseValue(); // last duplicate wins, as in the engine
      this.skipWs();
      const d = this.text[this.pos];
      if (d === ",") {
        this.pos += 1;
        continue;
      }
      if (d === "}") {
        this.pos += 1;
        return out;
      }
      this.fail("expecting ',' delimiter");
    }
  }

  parseArray(): JsonValue[] {
    this.pos += 1; // [
    const out: JsonValue[] = [];
    this.skipWs();
    if (this.text[this.pos] === "]") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      out.push(this.parseValue());
      this.skipWs();
      const d = this.text[this.pos];
      if (d === ",") {
        this.pos += 1;
        continue;
      }
      if (d === "]") {
        this.pos += 1;
        return out;
      }
      this.fail("expecting ',' delimiter");
    }
  }

  parseString(): string {
    const start = this.pos;
    this.pos += 1; // "
    let out = "";
    for (;;) {
      if (this.pos >= this.text.length) this.fail("unterminated string", start);
      const c = this.text[this.pos];
      if (c === '"') {
        this.pos += 1;
        return out;
      }
      if (c === "\\") {
        this.pos += 1;
        const e = this.text[this.pos];
        this.pos += 1;
        if (e === "u") {
          const hex = this.text.slice(this.pos, this.pos + 4);
          if (!/^[0-9a-fA-F]{4}$/.test(hex)) this.fail("invalid \\u escape", this.pos - 2);
          out += String.fromCharCode(parseInt(hex, 16));
          this.pos += 4;
        } else {
          const simple: { [k: string]: string } = {
            '"': '"', "\\": "\\", "/": "/", b: "\b", f: "\f", n: "\n", r: "\r", t: "\t",
          };
          if (!(e in simple)) this.fail(`invalid escape \\${e}`, this.pos - 2);
          out += simple[e];
        }
      } else if (c.charCodeAt(0) < 0x20) {
        this.fail("invalid control character in string");
      } else {
        out += c;
        this.pos += 1;
      }
    }
  }

  parseNumber(): JsonNum {
    const start = this.pos;
    if (this.text[this.pos] === "-") {
      this.pos += 1;
      if (this.text.startsWith("Infinity", this.pos)) {
        this.pos += 8;
        return new JsonNum(-Infinity, false);
      }
    }
    while (this.pos < this.text.length && /[0-9]/.test(this.text[this.pos])) this.pos += 1;
    let isInt = true;
    if (this.text[this.pos] === ".") {
      isInt = false;
      this.pos += 1;
      while (this.pos < this.text.length && /[0-9]/.test(this.text[this.pos])) this.pos += 1;
    }
    if (this.text[this.pos] === "e" || this.text[this.pos] === "E") {
      isInt = false;
      this.pos += 1;
      if (this.text[this.pos] === "+" || this.text[this.pos] === "-") this.pos += 1;
      while (this.pos < this.text.length && /[0-9]/.test(this.text[this.pos])) this.pos += 1;
    }
    const raw = this.text.slice(start, this.pos);
    if (!/^-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?$/.test(raw)) {
      this.fail("invalid number literal", start);
    }
    return new JsonNum(Number(raw), isInt);
  }
}

/** Parse JSON text, keeping the int/float distinction on number tokens. */
export function parseJson(text: string): JsonValue {
  const p = new Parser(text);
  const value = p.parseValue();
  p.skipWs();
  if (p.pos !== text.length) p.fail("extra data");
  return value;
}

// ---------------------------------------------------------------------------
// Float formatting

/**
 * Shortest round-trip decimal for a double, formatted the way the engine
 * prints floats: positional while the decimal point lands in (-4, 16],
 * exponent notation with a signed two-digit-minimum exponent outside that,
 * and a trailing ".0" on whole numbers.
 */
export function pyFloatRepr(x: number): string {
  if (!Number.isFinite(x)) {
    throw new RangeError(`non-finite float ${x} has no document representation`);
  }
  if (x === 0) return Object.is(x, -0) ? "-0.0" : "0.0";
  const neg = x < 0;
  const abs = Math.abs(x);
  // toExponential() with no argument yields exactly the shortest digit
  // string that reads back to the same double.
  const m = abs.toExponential().match(/^(\d)(?:\.(\d+))?e([+-]\d+)$/);
  if (!m) throw new Error(`unexpected exponential form for ${x}`);
  const digits = m[1] + (m[2] ?? "");
  const decpt = parseInt(m[3], 10) + 1; // value = 0.<digits> * 10^decpt
  let out: string;
  if (decpt <= -4 || decpt > 16) {
    const mantissa = digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits[0];
    const exp = decpt - 1;
    const sign = exp < 0 ? "-" : "+";
    out = `${mantissa}e${sign}${String(Math.abs(exp)).padStart(2, "0")}`;
  } else if (decpt <= 0) {
    out = `0.${"0".repeat(-decpt)}${digits}`;
  } else if (decpt >= digits.length) {
    out = `${digits}${"0".repeat(decpt - digits.length)}.0`;
  } else {
    out = `${digits.slice(0, decpt)}.${digits.slice(decpt)}`;
  }
  return neg ? `-${out}` : out;
}

export function pyIntRepr(x: number): string {
  if (!Number.isInteger(x)) {
    throw new RangeError(`${x} is not an integer`);
  }
  return String(x);
}

// ---------------------------------------------------------------------------
// Canonical writing

const STRING_ESCAPES: { [k: string]: string } = {
  '"': '\\"',
  "\\": "\\\\",
  "\b": "\\b",
  "\f": "\\f",
  "\n": "\\n",
  "\r": "\\r",
  "\t": "\\t",
};

/** ASCII-only string literal, escaping everything outside 0x20..0x7e. */
export function escapeString(s: string): string {
  let out = '"';
  for (let i = 0; i < s.length; i++) {
    const c = s[i];
    const code = s.charCodeAt(i);
    if (c in STRING_ESCAPES) {
      out += STRING_ESCAPES[c];
    } else if (code >= 0x20 && code <= 0x7e) {
      out += c;
    } else {
      // Surrogate halves escape individually, which matches the engine.
      out += `\\u${code.toString(16).padStart(4, "0")}`;
    }
  }
  return out + '"';
}

function sortedKeys(obj: { [key: string]: JsonValue }): string[] {
  return Object.keys(obj).sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));
}

function writeValue(v: JsonValue, level: number, out: string[]): void {
  if (v === null) {
    out.push("null");
  } else if (typeof v === "boolean") {
    out.push(v ? "true" : "false");
  } else if (typeof v === "string") {
    out.push(escapeString(v));
  } else if (v instanceof JsonNum) {
    out.push(v.isInt ? pyIntRepr(v.value) : pyFloatRepr(v.value));
  } else if (Array.isArray(v)) {
    if (v.length === 0) {
      out.push("[]");
      return;
    }
    const pad = "  ".repeat(level + 1);
    out.push("[\n");
    v.forEach((item, i) => {
      out.push(pad);
      writeValue(item, level + 1, out);
      out.push(i < v.length - 1 ? ",\n" : "\n");
    });
    out.push("  ".repeat(level) + "]");
  } else {
    const keys = sortedKeys(v);
    if (keys.length === 0) {
      out.push("{}");
      return;
    }
    const pad = "  ".repeat(level + 1);
    out.push("{\n");
    keys.forEach((key, i) => {
      out.push(pad + escapeString(key) + ": ");
      writeValue(v[key], level + 1, out);
      out.push(i < keys.length - 1 ? ",\n" : "\n");
    });
    out.push("  ".repeat(level) + "}");
  }
}

/**
 * Serialize a value tree to the canonical document form: sorted keys,
 * two-space indent, no trailing newline (callers append one).
 */
export function dumpJson(v: JsonValue): string {
  const out: string[] = [];
  writeValue(v, 0, out);
  return out.join("");
}
