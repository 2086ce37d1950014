// Byte-exact extraction of numeric fields from a raw JSON response.
//
// JSON.parse followed by String() can reformat a number (0.0 -> "0",
// 1e-05 -> "0.00001"), so metric cells are cut straight out of the
// response text instead. Keys are looked up by name; the first occurrence
// wins, which is unambiguous for the report summary fields used here.

const NUMBER = "-?(?:0|[1-9]\\d*)(?:\\.\\d+)?(?:[eE][+-]?\\d+)?";

export function rawNumber(jsonText: string, key: string): string | null {
  const match = jsonText.match(
    new RegExp(`"${key}"\\s*:\\s*(${NUMBER})`),
  );
  return match ? match[1] : null;
}

export function rawSummaryFields(
  jsonText: string,
  keys: string[],
): Record<string, string> {
  const out: Record<string, string> = {};
  for (const key of keys) {
    const value = rawNumber(jsonText, key);
    if (value !== null) out[key] = value;
  }
  return out;
}
