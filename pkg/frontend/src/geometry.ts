export type Vec = [number, number];

/** Half-plane {p : a.p >= c}. */
export interface HalfPlane {
  a: Vec;
  c: number;
}

const dot = (a: Vec, b: Vec): number => a[0] * b[0] + a[1] * b[1];

/**
 * Generators of the cone C = {u >= 0 : u^T(I-Q) <= 0} for two firms,
 * or null when q12*q21 < 1 and the cone collapses to the origin
 * (making the dual cone the whole plane).
 */
export function coneGenerators(q12: number, q21: number): [Vec, Vec] | null {
  if (q12 * q21 < 1) return null;
  return [
    [1, q12],
    [q21, 1],
  ];
}

/** Membership of y in the dual cone C*. */
export function inDualCone(q12: number, q21: number, y: Vec): boolean {
  const gens = coneGenerators(q12, q21);
  if (gens === null) return true;
  return dot(gens[0], y) >= 0 && dot(gens[1], y) >= 0;
}

/** Half-planes whose intersection is C (valid when q12*q21 >= 1). */
export function coneHalfPlanes(q12: number, q21: number): HalfPlane[] {
  // u1 - q21*u2 <= 0  and  u2 - q12*u1 <= 0
  return [
    { a: [-1, q21], c: 0 },
    { a: [q12, -1], c: 0 },
  ];
}

/** Half-planes whose intersection is C* (valid when q12*q21 >= 1). */
export function dualConeHalfPlanes(q12: number, q21: number): HalfPlane[] {
  return [
    { a: [1, q12], c: 0 },
    { a: [q21, 1], c: 0 },
  ];
}

/** Half-planes of the jump polytope {x >= 0 : (I-Q)x >= -y}. */
export function feasibleRegionHalfPlanes(
  q12: number,
  q21: number,
  y: Vec,
): HalfPlane[] {
  return [
    { a: [1, 0], c: 0 },
    { a: [0, 1], c: 0 },
    { a: [1, -q12], c: -y[0] },
    { a: [-q21, 1], c: -y[1] },
  ];
}

/** Sutherland-Hodgman clip of a convex polygon by one half-plane. */
export function clipPolygon(poly: Vec[], half: HalfPlane): Vec[] {
  const out: Vec[] = [];
  const n = poly.length;
  for (let i = 0; i < n; i++) {
    const s = poly[i];
    const e = poly[(i + 1) % n];
    const sIn = dot(half.a, s) >= half.c;
    const eIn = dot(half.a, e) >= half.c;
    if (sIn !== eIn) {
      const dir: Vec = [e[0] - s[0], e[1] - s[1]];
      const t = (half.c - dot(half.a, s)) / dot(half.a, dir);
      out.push([s[0] + t * dir[0], s[1] + t * dir[1]]);
    }
    if (eIn) out.push(e);
  }
  return out;
}

/** Intersection of an axis-aligned box with a set of half-planes. */
export function clipBox(
  xMin: number,
  xMax: number,
  yMin: number,
  yMax: number,
  halves: HalfPlane[],
): Vec[] {
  let poly: Vec[] = [
    [xMin, yMin],
    [xMax, yMin],
    [xMax, yMax],
    [xMin, yMax],
  ];
  for (const half of halves) {
    poly = clipPolygon(poly, half);
    if (poly.length === 0) return [];
  }
  return poly;
}
