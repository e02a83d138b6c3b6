import { Vec, clipBox, feasibleRegionHalfPlanes } from "./geometry.js";
import { circle, fmt, line, linearScale, polygon, svgDocument, text, ticks } from "./svg.js";

const SIZE = 560;
const MARGIN = 52;

/**
 * The jump polytope {dl >= 0 : (I-Q) dl >= -y} shaded in the first
 * quadrant, with the minimal jump marked when supplied (the renderer
 * never computes it itself).
 */
export function renderFeasibleRegion(
  q12: number,
  q21: number,
  y: Vec,
  jump?: Vec,
  title = "Feasible reflection jumps",
): string {
  const base = Math.max(2, 2 * Math.abs(y[0]), 2 * Math.abs(y[1]));
  const reach = jump ? Math.max(base, 1.6 * jump[0], 1.6 * jump[1]) : base;
  const x = linearScale([0, reach], [MARGIN, SIZE - MARGIN]);
  const yAxis = linearScale([0, reach], [SIZE - MARGIN, MARGIN]);
  const toScreen = (p: Vec): [number, number] => [x(p[0]), yAxis(p[1])];

  const body: string[] = [];
  const region = clipBox(0, reach, 0, reach, feasibleRegionHalfPlanes(q12, q21, y));
  if (region.length) {
    body.push(
      polygon(region.map(toScreen), 'fill="#6a51a3" fill-opacity="0.4" stroke="#4a1486" stroke-width="1"'),
    );
  } else {
    body.push(
      text(SIZE / 2, SIZE / 2, "no feasible jump (state outside C*)", 'font-size="14" fill="#c42020"', "middle"),
    );
  }

  const axisStyle = 'stroke="#333" stroke-width="1"';
  body.push(line(x(0), yAxis(0), x(reach), yAxis(0), axisStyle));
  body.push(line(x(0), yAxis(0), x(0), yAxis(reach), axisStyle));
  for (const tick of ticks(0, reach, 5)) {
    body.push(line(x(tick), yAxis(0), x(tick), yAxis(0) + 5, axisStyle));
    body.push(text(x(tick), yAxis(0) + 19, fmt(tick), 'font-size="11" fill="#333"', "middle"));
    body.push(line(x(0) - 5, yAxis(tick), x(0), yAxis(tick), axisStyle));
    body.push(text(x(0) - 8, yAxis(tick) + 4, fmt(tick), 'font-size="11" fill="#333"', "end"));
  }
  body.push(text(x(reach) - 4, yAxis(0) + 34, "ΔL₁", 'font-size="13" fill="#333"', "end"));
  body.push(text(x(0) + 8, yAxis(reach) - 8, "ΔL₂", 'font-size="13" fill="#333"'));

  if (jump) {
    const [jx, jy] = toScreen(jump);
    body.push(circle(jx, jy, 5, 'class="jump-marker" fill="#1a7a2e" stroke="white" stroke-width="1.2"'));
    body.push(
      text(jx + 9, jy - 8, `ΔL = (${fmt(jump[0])}, ${fmt(jump[1])})`, 'font-size="13" fill="#1a7a2e"'),
    );
  }
  body.push(text(SIZE / 2, SIZE - 12, title, 'font-size="14" fill="#111"', "middle"));
  return svgDocument(SIZE, SIZE, body);
}
