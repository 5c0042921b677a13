import { describe, expect, it } from "vitest";

import {
  add,
  cmp,
  frac,
  mass,
  parseWire,
  pieceValues,
  preferredPiece,
  preferredRoom,
  sub,
  valuation,
} from "../src/rational.js";

describe("fractions", () => {
  it("normalizes and compares exactly", () => {
    expect(frac(2, 4)).toEqual(frac(1, 2));
    expect(frac(-2, -4)).toEqual(frac(1, 2));
    expect(frac(2, -4).num).toBe(-1n);
    expect(cmp(frac(1, 3), frac(333333333, 1000000000))).toBe(1);
  });

  it("parses wire forms", () => {
    expect(parseWire([3, 9])).toEqual(frac(1, 3));
    expect(parseWire(2)).toEqual(frac(2));
    expect(parseWire("5/10")).toEqual(frac(1, 2));
  });

  it("adds and subtracts without drift", () => {
    let acc = frac(0);
    for (let i = 0; i < 300; i++) acc = add(acc, frac(1, 3));
    expect(acc).toEqual(frac(100));
    expect(sub(frac(1), frac(1, 10 ** 9)).den).toBe(BigInt(10 ** 9));
  });
});

describe("valuations", () => {
  const uniform = valuation([0, 1], [1]);
  const leftHalf = valuation([0, [1, 2], 1], [2, 0]);

  it("computes interval masses exactly", () => {
    expect(mass(uniform, frac(1, 4), frac(3, 4))).toEqual(frac(1, 2));
    expect(mass(leftHalf, frac(1, 4), frac(3, 4))).toEqual(frac(1, 2));
    expect(mass(leftHalf, frac(1, 2), frac(1))).toEqual(frac(0));
  });

  it("splits a division into piece values", () => {
    const lengths = [frac(1, 4), frac(1, 4), frac(1, 2)];
    expect(pieceValues(leftHalf, lengths)).toEqual([frac(1, 2), frac(1, 2), frac(0)]);
  });

  it("prefers the largest allowed piece, lowest index on ties", () => {
    const lengths = [frac(1, 3), frac(1, 3), frac(1, 3)];
    expect(preferredPiece(uniform, lengths, [1, 2, 3])).toBe(1);
    expect(preferredPiece(uniform, lengths, [2, 3])).toBe(2);
    const skewed = [frac(1, 4), frac(1, 4), frac(1, 2)];
    expect(preferredPiece(uniform, skewed, [1, 2, 3])).toBe(3);
    expect(preferredPiece(leftHalf, skewed, [1, 2, 3])).toBe(1);
  });

  it("prefers the best quasilinear room", () => {
    const values = [frac(10), frac(8)];
    expect(preferredRoom(values, [frac(3), frac(0)], [1, 2])).toBe(2);
    expect(preferredRoom(values, [frac(1), frac(0)], [1, 2])).toBe(1);
  });
});
