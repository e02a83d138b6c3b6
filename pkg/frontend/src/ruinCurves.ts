import { RuinCurvesTable } from "./csv.js";
import { circle, line, linearScale, polygon, polyline, svgDocument, text, ticks, fmt } from "./svg.js";

export interface CurveStyle {
  probColumn: "p_t1" | "p_t2" | "p_both" | "p_either" | "p_tau";
  ciColumn: "ci_t1" | "ci_t2" | "ci_both" | "ci_either" | "ci_tau";
  label: string;
  color: string;
}

export const CURVES: CurveStyle[] = [
  { probColumn: "p_t1", ciColumn: "ci_t1", label: "P(T¹ ≤ t)", color: "#1f77b4" },
  { probColumn: "p_t2", ciColumn: "ci_t2", label: "P(T² ≤ t)", color: "#ff7f0e" },
  { probColumn: "p_both", ciColumn: "ci_both", label: "P(T¹ ≤ t, T² ≤ t)", color: "#2ca02c" },
  { probColumn: "p_either", ciColumn: "ci_either", label: "P(T¹ ≤ t or T² ≤ t)", color: "#d62728" },
  { probColumn: "p_tau", ciColumn: "ci_tau", label: "P(τ* ≤ t)", color: "#9467bd" },
];

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { left: 64, right: 24, top: 44, bottom: 52 };

/**
 * One figure with the five ruin/breakdown curves and their 95%
 * confidence bands over the time grid of the CSV.
 */
export function renderRuinCurves(table: RuinCurvesTable, title = "Ruin probabilities"): string {
  const t = table.t;
  const tMax = t[t.length - 1];
  const x = linearScale([0, tMax || 1], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, 1], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const body: string[] = [];
  const axisStyle = 'stroke="#333" stroke-width="1"';
  body.push(line(x(0), y(0), x(tMax || 1), y(0), axisStyle));
  body.push(line(x(0), y(0), x(0), y(1), axisStyle));
  for (const tick of ticks(0, tMax || 1)) {
    body.push(line(x(tick), y(0), x(tick), y(0) + 5, axisStyle));
    body.push(text(x(tick), y(0) + 20, fmt(tick), 'font-size="12" fill="#333"', "middle"));
  }
  for (const tick of ticks(0, 1, 5)) {
    body.push(line(x(0) - 5, y(tick), x(0), y(tick), axisStyle));
    body.push(text(x(0) - 9, y(tick) + 4, fmt(tick), 'font-size="12" fill="#333"', "end"));
    body.push(line(x(0), y(tick), x(tMax || 1), y(tick), 'stroke="#ddd" stroke-width="0.5"'));
  }
  body.push(text(WIDTH / 2, HEIGHT - 14, "t", 'font-size="14" fill="#333"', "middle"));
  body.push(text(WIDTH / 2, 24, title, 'font-size="16" fill="#111"', "middle"));

  for (const curve of CURVES) {
    const probs = table[curve.probColumn];
    const cis = table[curve.ciColumn];
    const upper = t.map((tv, i): [number, number] => [
      x(tv),
      y(Math.min(1, probs[i] + cis[i])),
    ]);
    const lower = t.map((tv, i): [number, number] => [
      x(tv),
      y(Math.max(0, probs[i] - cis[i])),
    ]);
    body.push(
      polygon(
        [...upper, ...lower.reverse()],
        `fill="${curve.color}" fill-opacity="0.15" stroke="none"`,
      ),
    );
    body.push(
      polyline(
        t.map((tv, i): [number, number] => [x(tv), y(probs[i])]),
        `stroke="${curve.color}" stroke-width="1.8"`,
      ),
    );
  }

  const legendX = MARGIN.left + 14;
  let legendY = MARGIN.top + 8;
  body.push(
    `<rect x="${legendX - 8}" y="${legendY - 14}" width="185" height="${CURVES.length * 19 + 10}" ` +
      'fill="white" fill-opacity="0.85" stroke="#999" stroke-width="0.5"/>',
  );
  for (const curve of CURVES) {
    body.push(line(legendX, legendY, legendX + 22, legendY, `stroke="${curve.color}" stroke-width="2.5"`));
    body.push(circle(legendX + 11, legendY, 0, 'stroke="none" fill="none"'));
    body.push(text(legendX + 28, legendY + 4, curve.label, 'font-size="12" fill="#111"'));
    legendY += 19;
  }

  return svgDocument(WIDTH, HEIGHT, body);
}
