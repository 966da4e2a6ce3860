// Thin typed client over the HTTP API. All retrieval logic stays server-side;
// this module only builds requests and decodes responses.

import type {
  Favorite,
  ScreenDetail,
  SearchResponse,
  SimilarScreen,
  SuggestResponse,
} from "./types.js";
import { PAGE_SIZE, type UiSearchState, normalizeState } from "./state.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
    public readonly offset?: number,
  ) {
    super(message);
  }
}

async function decode<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "HttpError";
  let message = `request failed with status ${response.status}`;
  let offset: number | undefined;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
      offset = body.error.offset;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(code, message, response.status, offset);
}

export function buildSearchParams(state: UiSearchState, pageSize = PAGE_SIZE): URLSearchParams {
  const s = normalizeState(state);
  const params = new URLSearchParams();
  params.set("q", s.query);
  if (s.color) {
    params.set("color", s.color);
    params.set("tol", String(s.tolerance));
  }
  for (const ui of s.uiFilters) params.append("ui", ui);
  for (const st of s.screenTypeFilters) params.append("screen_type", st);
  params.set("page", String(s.page));
  params.set("page_size", String(pageSize));
  return params;
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly base = "",
  ) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, { signal });
    return decode<T>(response);
  }

  search(state: UiSearchState, pageSize = PAGE_SIZE, signal?: AbortSignal): Promise<SearchResponse> {
    return this.get(`/api/search?${buildSearchParams(state, pageSize)}`, signal);
  }

  suggest(prefix: string, limit = 8, signal?: AbortSignal): Promise<SuggestResponse> {
    const params = new URLSearchParams({ prefix, limit: String(limit) });
    return this.get(`/api/suggest?${params}`, signal);
  }

  screenDetail(docId: string): Promise<ScreenDetail> {
    return this.get(`/api/screens/${docId}`);
  }

  similar(docId: string, k = 5): Promise<{ doc_id: string; similar: SimilarScreen[] }> {
    return this.get(`/api/screens/${docId}/similar?k=${k}`);
  }

  async favorites(): Promise<Favorite[]> {
    const body = await this.get<{ favorites: Favorite[] }>("/api/favorites");
    return body.favorites;
  }

  async addFavorite(docId: string): Promise<void> {
    await decode(await this.fetchFn(`${this.base}/api/favorites/${docId}`, { method: "POST" }));
  }

  async removeFavorite(docId: string): Promise<void> {
    await decode(await this.fetchFn(`${this.base}/api/favorites/${docId}`, { method: "DELETE" }));
  }
}
