// UI search state and its URL (hash) serialization. The whole state lives in
// the hash so result pages are shareable and the back button works.

export const DEFAULT_TOLERANCE = 0.25;
export const PAGE_SIZE = 10;

export interface UiSearchState {
  query: string;
  color: string | null; // 6-digit hex, no leading '#'
  tolerance: number; // slider scalar in [0,1]
  uiFilters: string[];
  screenTypeFilters: string[];
  page: number;
}

export type Route =
  | { kind: "search"; state: UiSearchState }
  | { kind: "screen"; docId: string }
  | { kind: "favorites" };

export function defaultState(): UiSearchState {
  return {
    query: "",
    color: null,
    tolerance: DEFAULT_TOLERANCE,
    uiFilters: [],
    screenTypeFilters: [],
    page: 0,
  };
}

function clamp01(x: number): number {
  return Math.min(1, Math.max(0, x));
}

export function normalizeState(s: UiSearchState): UiSearchState {
  return {
    query: s.query.trim(),
    color: s.color ? s.color.replace(/^#/, "").toLowerCase() : null,
    tolerance: clamp01(Number.isFinite(s.tolerance) ? s.tolerance : DEFAULT_TOLERANCE),
    uiFilters: [...s.uiFilters].sort(),
    screenTypeFilters: [...s.screenTypeFilters].sort(),
    page: Math.max(0, Math.floor(s.page)),
  };
}

export function stateToParams(state: UiSearchState): URLSearchParams {
  const s = normalizeState(state);
  const params = new URLSearchParams();
  if (s.query) params.set("q", s.query);
  if (s.color) {
    params.set("color", s.color);
    params.set("tol", String(s.tolerance));
  }
  for (const ui of s.uiFilters) params.append("ui", ui);
  for (const st of s.screenTypeFilters) params.append("screen_type", st);
  if (s.page > 0) params.set("page", String(s.page));
  return params;
}

export function stateFromParams(params: URLSearchParams): UiSearchState {
  const tolRaw = params.get("tol");
  return normalizeState({
    query: params.get("q") ?? "",
    color: params.get("color"),
    tolerance: tolRaw === null ? DEFAULT_TOLERANCE : Number(tolRaw),
    uiFilters: params.getAll("ui"),
    screenTypeFilters: params.getAll("screen_type"),
    page: Number(params.get("page") ?? "0"),
  });
}

export function routeToHash(route: Route): string {
  switch (route.kind) {
    case "search": {
      const params = stateToParams(route.state).toString();
      return params ? `#/search?${params}` : "#/search";
    }
    case "screen":
      return `#/screen/${encodeURIComponent(route.docId)}`;
    case "favorites":
      return "#/favorites";
  }
}

export function parseHash(hash: string): Route {
  const cleaned = hash.startsWith("#") ? hash.slice(1) : hash;
  if (cleaned.startsWith("/screen/")) {
    return { kind: "screen", docId: decodeURIComponent(cleaned.slice("/screen/".length)) };
  }
  if (cleaned.startsWith("/favorites")) {
    return { kind: "favorites" };
  }
  const qIndex = cleaned.indexOf("?");
  const params = qIndex >= 0 ? new URLSearchParams(cleaned.slice(qIndex + 1)) : new URLSearchParams();
  return { kind: "search", state: stateFromParams(params) };
}
