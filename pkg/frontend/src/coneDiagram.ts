import {
  Vec,
  clipBox,
  coneGenerators,
  coneHalfPlanes,
  dualConeHalfPlanes,
  inDualCone,
} from "./geometry.js";
import { circle, fmt, line, linearScale, polygon, svgDocument, text } from "./svg.js";

const SIZE = 560;
const MARGIN = 46;

/**
 * Cone picture for two firms: C shaded dark, the rest of C* shaded
 * light, the tested point marked as inside or outside C*. When
 * q12*q21 < 1 the whole plane is C* and the figure says so.
 */
export function renderConeDiagram(
  q12: number,
  q21: number,
  y: Vec,
  title = "Continuability cone",
): string {
  const reach = Math.max(2, 1.35 * Math.abs(y[0]), 1.35 * Math.abs(y[1]));
  const x = linearScale([-reach, reach], [MARGIN, SIZE - MARGIN]);
  const yAxis = linearScale([-reach, reach], [SIZE - MARGIN, MARGIN]);
  const toScreen = (p: Vec): [number, number] => [x(p[0]), yAxis(p[1])];

  const body: string[] = [];
  const member = inDualCone(q12, q21, y);
  const generators = coneGenerators(q12, q21);

  if (generators === null) {
    body.push(
      polygon(
        [
          [x(-reach), yAxis(-reach)],
          [x(reach), yAxis(-reach)],
          [x(reach), yAxis(reach)],
          [x(-reach), yAxis(reach)],
        ],
        'fill="#9ecae7" fill-opacity="0.35" stroke="none"',
      ),
    );
    body.push(
      text(
        SIZE / 2,
        MARGIN + 22,
        `q12·q21 = ${fmt(q12 * q21)} < 1: C = {0} and C* is the whole plane`,
        'font-size="13" fill="#111"',
        "middle",
      ),
    );
  } else {
    const dualPoly = clipBox(-reach, reach, -reach, reach, dualConeHalfPlanes(q12, q21));
    if (dualPoly.length) {
      body.push(
        polygon(dualPoly.map(toScreen), 'fill="#9ecae7" fill-opacity="0.45" stroke="none"'),
      );
    }
    const conePoly = clipBox(-reach, reach, -reach, reach, coneHalfPlanes(q12, q21));
    if (conePoly.length) {
      body.push(
        polygon(conePoly.map(toScreen), 'fill="#6a51a3" fill-opacity="0.55" stroke="none"'),
      );
    }
    for (const g of generators) {
      const scale = reach / Math.max(Math.abs(g[0]), Math.abs(g[1]));
      body.push(
        line(x(0), yAxis(0), x(g[0] * scale), yAxis(g[1] * scale), 'stroke="#4a1486" stroke-width="1.4" stroke-dasharray="5,3"'),
      );
    }
    body.push(text(x(reach * 0.52), yAxis(reach * 0.78), "C", 'font-size="15" fill="#2d115f"'));
    body.push(text(x(reach * 0.6), yAxis(-reach * 0.35), "C*", 'font-size="15" fill="#1d5a7a"'));
  }

  const axisStyle = 'stroke="#333" stroke-width="1"';
  body.push(line(x(-reach), yAxis(0), x(reach), yAxis(0), axisStyle));
  body.push(line(x(0), yAxis(-reach), x(0), yAxis(reach), axisStyle));
  body.push(text(x(reach) - 4, yAxis(0) + 16, "y₁", 'font-size="13" fill="#333"', "end"));
  body.push(text(x(0) + 8, yAxis(reach) + 12, "y₂", 'font-size="13" fill="#333"'));

  const [px, py] = toScreen(y);
  const markerColor = member ? "#1a7a2e" : "#c42020";
  const markerClass = member ? "point-inside" : "point-outside";
  body.push(circle(px, py, 5, `class="${markerClass}" fill="${markerColor}" stroke="white" stroke-width="1.2"`));
  body.push(
    text(
      px + 9,
      py - 8,
      `y = (${fmt(y[0])}, ${fmt(y[1])}) ${member ? "∈ C*" : "∉ C*"}`,
      `font-size="13" fill="${markerColor}"`,
    ),
  );
  body.push(text(SIZE / 2, SIZE - 12, title, 'font-size="14" fill="#111"', "middle"));
  return svgDocument(SIZE, SIZE, body);
}
