/**
 * UI search state and its URL query-string encoding.
 *
 * The entire state of the page lives in this structure so that any view can
 * be reproduced from its URL alone.  `serializeState` and `parseState` are
 * inverses up to canonicalisation: serialize(parse(serialize(s))) equals
 * serialize(s) for every state, which keeps browser history entries stable.
 */

export const FIELD_TYPES = [
  "title",
  "description",
  "study",
  "assay",
  "person",
  "publication",
  "parameter",
] as const;

export type FieldType = (typeof FIELD_TYPES)[number];

export interface FilterChip {
  fieldType: FieldType;
  match: string;
}

export interface UISearchState {
  query: string;
  alpha: number;
  topK: number;
  filters: FilterChip[];
}

export const DEFAULT_STATE: UISearchState = {
  query: "",
  alpha: 0.5,
  topK: 10,
  filters: [],
};

const ALPHA_STEPS = 100;

export function isFieldType(value: string): value is FieldType {
  return (FIELD_TYPES as readonly string[]).includes(value);
}

/** Clamp to [0, 1] and snap to the slider's step grid. */
export function canonicalAlpha(alpha: number): number {
  if (!Number.isFinite(alpha)) return DEFAULT_STATE.alpha;
  const clamped = Math.min(1, Math.max(0, alpha));
  return Math.round(clamped * ALPHA_STEPS) / ALPHA_STEPS;
}

/** Map a slider position in [0, steps] linearly onto [0, 1]. */
export function sliderToAlpha(position: number, steps: number = ALPHA_STEPS): number {
  return canonicalAlpha(position / steps);
}

export function alphaToSlider(alpha: number, steps: number = ALPHA_STEPS): number {
  return Math.round(canonicalAlpha(alpha) * steps);
}

function canonicalTopK(topK: number): number {
  if (!Number.isFinite(topK)) return DEFAULT_STATE.topK;
  return Math.min(100, Math.max(1, Math.round(topK)));
}

function canonicalFilters(filters: FilterChip[]): FilterChip[] {
  const out: FilterChip[] = [];
  for (const f of filters) {
    const match = f.match.trim();
    if (match === "" || !isFieldType(f.fieldType)) continue;
    if (out.some((g) => g.fieldType === f.fieldType && g.match === match)) continue;
    out.push({ fieldType: f.fieldType, match });
  }
  return out;
}

/** Normalise a state so that equal views serialize identically. */
export function canonicalState(state: UISearchState): UISearchState {
  return {
    query: state.query.trim(),
    alpha: canonicalAlpha(state.alpha),
    topK: canonicalTopK(state.topK),
    filters: canonicalFilters(state.filters),
  };
}

/**
 * Encode a state as a URL query string (no leading "?").
 *
 * Defaults are omitted so that the empty state serializes to "".  Filters
 * use one repeated `f` parameter per chip, `fieldType:match`.
 */
export function serializeState(state: UISearchState): string {
  const s = canonicalState(state);
  const params = new URLSearchParams();
  if (s.query !== "") params.set("q", s.query);
  if (s.alpha !== DEFAULT_STATE.alpha) params.set("alpha", s.alpha.toString());
  if (s.topK !== DEFAULT_STATE.topK) params.set("k", s.topK.toString());
  for (const f of s.filters) params.append("f", `${f.fieldType}:${f.match}`);
  return params.toString();
}

/** Decode a query string (with or without leading "?") into a state. */
export function parseState(queryString: string): UISearchState {
  const params = new URLSearchParams(
    queryString.startsWith("?") ? queryString.slice(1) : queryString,
  );
  const filters: FilterChip[] = [];
  for (const raw of params.getAll("f")) {
    const sep = raw.indexOf(":");
    if (sep <= 0) continue;
    const fieldType = raw.slice(0, sep);
    const match = raw.slice(sep + 1);
    if (isFieldType(fieldType)) filters.push({ fieldType, match });
  }
  const alphaRaw = params.get("alpha");
  const topKRaw = params.get("k");
  return canonicalState({
    query: params.get("q") ?? "",
    alpha: alphaRaw === null ? DEFAULT_STATE.alpha : Number(alphaRaw),
    topK: topKRaw === null ? DEFAULT_STATE.topK : Number(topKRaw),
    filters,
  });
}
