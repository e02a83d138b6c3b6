import { readFileSync } from "fs";
import Papa from "papaparse";

export const RUIN_CURVES_HEADER = [
  "t",
  "p_t1",
  "ci_t1",
  "p_t2",
  "ci_t2",
  "p_both",
  "ci_both",
  "p_either",
  "ci_either",
  "p_tau",
  "ci_tau",
] as const;

export type RuinColumn = (typeof RUIN_CURVES_HEADER)[number];

export type RuinCurvesTable = Record<RuinColumn, number[]>;

export class SchemaError extends Error {}

/** Parse a ruin-curves CSV, enforcing the documented column schema. */
export function parseRuinCurvesCsv(text: string): RuinCurvesTable {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse failure: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError("CSV is empty");
  }
  const header = rows[0];
  const expected = RUIN_CURVES_HEADER.join(",");
  if (header.join(",") !== expected) {
    throw new SchemaError(
      `column mismatch: expected [${expected}], found [${header.join(",")}]`,
    );
  }
  const dataRows = rows.slice(1);
  if (dataRows.length === 0) {
    throw new SchemaError("CSV has a header but no data rows");
  }
  const table = Object.fromEntries(
    RUIN_CURVES_HEADER.map((name) => [name, [] as number[]]),
  ) as RuinCurvesTable;
  dataRows.forEach((row, i) => {
    if (row.length !== RUIN_CURVES_HEADER.length) {
      throw new SchemaError(
        `row ${i + 1} has ${row.length} cells, expected ${RUIN_CURVES_HEADER.length}`,
      );
    }
    row.forEach((cell, j) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `row ${i + 1}, column ${RUIN_CURVES_HEADER[j]}: not a number: ${cell}`,
        );
      }
      table[RUIN_CURVES_HEADER[j]].push(value);
    });
  });
  return table;
}

export function readRuinCurvesCsv(path: string): RuinCurvesTable {
  return parseRuinCurvesCsv(readFileSync(path, "utf-8"));
}
