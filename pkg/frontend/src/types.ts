// Response shapes of the screenseek HTTP API.

export interface SearchHit {
  doc_id: string;
  score: number;
  app_name: string;
  thumbnail: string;
  snippet: string;
}

export interface SearchResponse {
  query: string;
  canonical_query: string;
  total: number;
  page: number;
  page_size: number;
  results: SearchHit[];
}

export interface Suggestion {
  value: string;
  category: string;
}

export interface SuggestResponse {
  prefix: string;
  suggestions: Suggestion[];
}

export interface AppInfo {
  package_id: string;
  app_name: string;
  store_url: string;
  description?: string | null;
}

export interface PaletteEntry {
  rgb: number[];
  hex: string;
  hsl: number[];
  proportion: number;
}

export interface SimilarScreen {
  doc_id: string;
  similarity: number;
}

export interface ScreenDetail {
  doc_id: string;
  app: AppInfo;
  activity_name: string;
  screen_type: string;
  palette: PaletteEntry[];
  component_classes: string[];
  component_texts: string[];
  image: string;
  thumbnail: string;
  similar: SimilarScreen[];
  same_app: string[];
}

export interface Favorite {
  doc_id: string;
  added_at: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  offset?: number;
}
