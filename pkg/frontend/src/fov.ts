/*
  View-wedge geometry.  inFov is a line-for-line port of the engine's
  point test, so the wedge drawn by the editor and the visibility the
  engine computes agree on which side of the boundary a point falls.
*/

export interface Wedge {
  /** Apex of the fan, world coordinates. */
  position: [number, number];
  /** Facing, radians. */
  heading: number;
  /** Full opening angle, radians. */
  sightAngle: number;
  sightRange: number;
}

export function inFov(w: Wedge, point: [number, number]): boolean {
  const dx = point[0] - w.position[0];
  const dy = point[1] - w.position[1];
  const dist = Math.hypot(dx, dy);
  if (dist > w.sightRange) return false;
  if (dist === 0) return true;
  const dot = dx * Math.cos(w.heading) + dy * Math.sin(w.heading);
  return dot / dist >= Math.cos(w.sightAngle / 2);
}

export const WEDGE_ARC_SEGMENTS = 256;

// Vertices sit a hair inside the exact boundary so every one of them
// passes inFov even after the distance computation rounds upward.
const EDGE_INSET = 1e-9;

/**
 * Closed polygon tracing the wedge: apex, then the arc from the right
 * edge of the fan to the left.  A full-circle sight angle drops the apex
 * and returns the arc alone.
 */
export function wedgePolygon(w: Wedge, segments = WEDGE_ARC_SEGMENTS): [number, number][] {
  const half = (w.sightAngle / 2) * (1 - EDGE_INSET);
  const r = w.sightRange * (1 - EDGE_INSET);
  const fullCircle = w.sightAngle >= 2 * Math.PI - 1e-12;
  const pts: [number, number][] = [];
  if (!fullCircle) pts.push([w.position[0], w.position[1]]);
  for (let k = 0; k <= segments; k++) {
    const a = w.heading - half + (2 * half * k) / segments;
    pts.push([w.position[0] + r * Math.cos(a), w.position[1] + r * Math.sin(a)]);
  }
  return pts;
}

/** Even-odd ray cast; on-edge points are not guaranteed either way. */
export function pointInPolygon(poly: [number, number][], p: [number, number]): boolean {
  let inside = false;
  for (let i = 0, j = poly.length - 1; i < poly.length; j = i++) {
    const [xi, yi] = poly[i];
    const [xj, yj] = poly[j];
    if (yi > p[1] !== yj > p[1]) {
      const x = xi + ((p[1] - yi) * (xj - xi)) / (yj - yi);
      if (p[0] < x) inside = !inside;
    }
  }
  return inside;
}
