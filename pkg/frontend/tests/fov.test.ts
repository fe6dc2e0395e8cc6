import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { inFov, pointInPolygon, Wedge, wedgePolygon } from "../src/fov.js";

interface Sample {
  position: [number, number];
  heading: number;
  sight_angle: number;
  sight_range: number;
  point: [number, number];
  inside: boolean;
}

const SAMPLES = JSON.parse(
  readFileSync(new URL("./fixtures/fov_samples.json", import.meta.url), "utf-8"),
) as Sample[];

function wedgeOf(s: Sample): Wedge {
  return {
    position: s.position,
    heading: s.heading,
    sightAngle: s.sight_angle,
    sightRange: s.sight_range,
  };
}

describe("view wedge vs engine", () => {
  it("has exactly 100 boundary samples", () => {
    expect(SAMPLES.length).toBe(100);
  });

  it("inFov agrees with the engine verdict on every sample", () => {
    const wrong = SAMPLES.filter((s) => inFov(wedgeOf(s), s.point) !== s.inside);
    expect(wrong).toEqual([]);
  });

  it("the drawn polygon classifies the same points the same way", () => {
    for (const s of SAMPLES) {
      const d = Math.hypot(s.point[0] - s.position[0], s.point[1] - s.position[1]);
      if (d < 1e-9) continue; // the apex itself is a polygon vertex
      const poly = wedgePolygon(wedgeOf(s));
      expect(pointInPolygon(poly, s.point), JSON.stringify(s)).toBe(s.inside);
    }
  });
});

describe("wedge polygon", () => {
  it("every vertex satisfies inFov", () => {
    for (const s of SAMPLES.slice(0, 25)) {
      const w = wedgeOf(s);
      for (const v of wedgePolygon(w)) {
        expect(inFov(w, v), `${JSON.stringify(w)} vertex ${v}`).toBe(true);
      }
    }
  });

  it("spans heading plus and minus half the sight angle", () => {
    const w: Wedge = {
      position: [0, 0],
      heading: Math.PI / 2,
      sightAngle: (2 * Math.PI) / 3, // 120 degrees: wedge spans heading +- 60
      sightRange: 10,
    };
    const poly = wedgePolygon(w);
    expect(poly[0]).toEqual([0, 0]);
    const first = poly[1];
    const last = poly[poly.length - 1];
    const angleOf = (p: [number, number]) => Math.atan2(p[1], p[0]);
    expect(angleOf(first)).toBeCloseTo(Math.PI / 2 - Math.PI / 3, 6);
    expect(angleOf(last)).toBeCloseTo(Math.PI / 2 + Math.PI / 3, 6);
    // Just outside both radial edges fails, just inside passes.
    expect(inFov(w, [Math.cos(0.52) * 5, Math.sin(0.52) * 5])).toBe(false);
    expect(inFov(w, [Math.cos(0.53) * 5, Math.sin(0.53) * 5])).toBe(true);
  });

  it("a full-circle fan drops the apex spike", () => {
    const w: Wedge = { position: [3, 4], heading: 1, sightAngle: 2 * Math.PI, sightRange: 5 };
    const poly = wedgePolygon(w, 64);
    expect(poly.length).toBe(65);
    expect(pointInPolygon(poly, [3, 4])).toBe(true);
    expect(pointInPolygon(poly, [3, 9.5])).toBe(false);
  });
});
