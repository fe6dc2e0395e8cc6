import { describe, expect, it } from "vitest";

import {
  blockSide,
  footprintAt,
  footprintClear,
  gridShape,
  occupiedSlots,
  snapPoint,
} from "../src/grid.js";
import { loadScenario } from "../src/scenario.js";

const FIELD = { width: 40, height: 40, margin: 2 };

describe("grid derivation", () => {
  it("gives 18 x 18 usable cells for the default layout", () => {
    expect(gridShape(40, 40, 2, 2)).toEqual({ cols: 18, rows: 18 });
  });

  it("handles non-square fields and coarse spacing", () => {
    expect(gridShape(60, 30, 3, 4)).toEqual({ cols: 13, rows: 6 });
    expect(gridShape(10, 10, 5, 2)).toEqual({ cols: 0, rows: 0 });
  });
});

describe("snapping", () => {
  it("lands on the nearest lattice point", () => {
    expect(snapPoint([10.3, 10.7], FIELD, 2)).toEqual([10, 10]);
    expect(snapPoint([11.0, 11.1], FIELD, 2)).toEqual([12, 12]);
  });

  it("clamps to the grid edge", () => {
    expect(snapPoint([0.1, 39.9], FIELD, 2)).toEqual([2, 38]);
  });
});

describe("footprints", () => {
  it("single-slot units claim one lattice point", () => {
    const fp = footprintAt([10.3, 10.7], 1, FIELD, 2)!;
    expect(fp.slots).toEqual([[4, 4]]);
    expect(fp.center).toEqual([10, 10]);
  });

  it("four-slot units claim a 2 x 2 block centered between them", () => {
    expect(blockSide(4)).toBe(2);
    const fp = footprintAt([30.2, 19.9], 4, FIELD, 2)!;
    expect(fp.slots).toEqual([
      [14, 9], [15, 9],
      [14, 10], [15, 10],
    ]);
    expect(fp.center).toEqual([31, 21]);
  });

  it("shifts a block back from the far edge", () => {
    const fp = footprintAt([38, 38], 4, FIELD, 2)!;
    expect(Math.max(...fp.slots.map(([i]) => i))).toBeLessThanOrEqual(18);
    expect(fp.center).toEqual([37, 37]);
  });
});

describe("occupancy", () => {
  const config = loadScenario(
    JSON.stringify({
      name: "occ",
      units: [
        { team: 0, position: [10.0, 10.0], preset: "farmer" },
        { team: 1, position: [31.0, 21.0], preset: "mammoth" },
      ],
    }),
  );

  it("recovers slot claims from stored positions", () => {
    const taken = occupiedSlots(config, 2);
    expect(taken.has("4,4")).toBe(true); // farmer at (10, 10)
    expect(taken.has("14,9")).toBe(true); // mammoth block corner
    expect(taken.has("15,10")).toBe(true);
    expect(taken.size).toBe(5);
  });

  it("classifies clear and blocked footprints", () => {
    const taken = occupiedSlots(config, 2);
    expect(footprintClear(footprintAt([20, 20], 1, FIELD, 2)!, taken)).toBe(true);
    expect(footprintClear(footprintAt([30.1, 20.2], 1, FIELD, 2)!, taken)).toBe(false);
  });
});
