// Exact rational arithmetic over bigint: the server speaks [num, den]
// pairs and answers must never go through floating point.

export interface Frac {
  num: bigint;
  den: bigint;
}

export type WireNumber = [number, number] | number | string;

function gcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a;
  b = b < 0n ? -b : b;
  while (b) {
    [a, b] = [b, a % b];
  }
  return a;
}

export function frac(num: bigint | number, den: bigint | number = 1n): Frac {
  let n = BigInt(num);
  let d = BigInt(den);
  if (d === 0n) throw new Error("zero denominator");
  if (d < 0n) {
    n = -n;
    d = -d;
  }
  const g = gcd(n, d) || 1n;
  return { num: n / g, den: d / g };
}

export function parseWire(x: WireNumber): Frac {
  if (Array.isArray(x)) return frac(x[0], x[1]);
  if (typeof x === "number") {
    if (!Number.isInteger(x)) throw new Error(`non-integer wire number ${x}`);
    return frac(x);
  }
  const m = x.split("/");
  if (m.length === 2) return frac(BigInt(m[0]!), BigInt(m[1]!));
  return frac(BigInt(x));
}

export function add(a: Frac, b: Frac): Frac {
  return frac(a.num * b.den + b.num * a.den, a.den * b.den);
}

export function sub(a: Frac, b: Frac): Frac {
  return frac(a.num * b.den - b.num * a.den, a.den * b.den);
}

export function mul(a: Frac, b: Frac): Frac {
  return frac(a.num * b.num, a.den * b.den);
}

export function cmp(a: Frac, b: Frac): number {
  const lhs = a.num * b.den;
  const rhs = b.num * a.den;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

export const ZERO = frac(0);
export const ONE = frac(1);

export function min(a: Frac, b: Frac): Frac {
  return cmp(a, b) <= 0 ? a : b;
}

export function max(a: Frac, b: Frac): Frac {
  return cmp(a, b) >= 0 ? a : b;
}

export function toNumber(a: Frac): number {
  return Number(a.num) / Number(a.den);
}

// Piecewise-constant density on [0,1]; enough for scripted agents to
// answer preference queries exactly the way an automated player would.
export interface Valuation {
  breakpoints: Frac[];
  densities: Frac[];
}

export function valuation(breakpoints: WireNumber[], densities: WireNumber[]): Valuation {
  if (breakpoints.length !== densities.length + 1) {
    throw new Error("need one density per segment");
  }
  return {
    breakpoints: breakpoints.map(parseWire),
    densities: densities.map(parseWire),
  };
}

export function mass(v: Valuation, lo: Frac, hi: Frac): Frac {
  let out = ZERO;
  for (let i = 0; i < v.densities.length; i++) {
    const d = v.densities[i]!;
    if (d.num === 0n) continue;
    const left = max(v.breakpoints[i]!, lo);
    const right = min(v.breakpoints[i + 1]!, hi);
    if (cmp(right, left) > 0) {
      out = add(out, mul(d, sub(right, left)));
    }
  }
  return out;
}

export function pieceValues(v: Valuation, lengths: Frac[]): Frac[] {
  const values: Frac[] = [];
  let acc = ZERO;
  for (const len of lengths) {
    const next = add(acc, len);
    values.push(mass(v, acc, next));
    acc = next;
  }
  return values;
}

// Preferred piece among the allowed ones: largest value, lowest index on
// ties -- the same rule the automated sources use server-side.
export function preferredPiece(v: Valuation, lengths: Frac[], allowed: number[]): number {
  const values = pieceValues(v, lengths);
  let best = allowed[0]!;
  for (const j of allowed) {
    if (cmp(values[j - 1]!, values[best - 1]!) > 0) best = j;
  }
  return best;
}

// Quasilinear room choice: value minus price, lowest index on ties.
export function preferredRoom(values: Frac[], prices: Frac[], allowed: number[]): number {
  let best = allowed[0]!;
  for (const j of allowed) {
    const a = sub(values[j - 1]!, prices[j - 1]!);
    const b = sub(values[best - 1]!, prices[best - 1]!);
    if (cmp(a, b) > 0) best = j;
  }
  return best;
}
